from pathlib import Path
from typing import Any, Dict, Optional

from pytorch_lightning.utilities import rank_zero_only

from uniflab.loader import format_problem


class SuiteCallback(object):
    """Hooks the crosscheck harness calls around each suite and instance."""

    def on_suite_start(self, suite: str, size: int) -> None:
        pass

    def on_instance_end(self, suite: str, index: int, record: Dict[str, Any]) -> None:
        pass

    def on_mismatch(self, suite: str, index: int, problem: Any, detail: str) -> None:
        pass

    def on_suite_end(self, suite: str, summary: Dict[str, Any]) -> None:
        pass


class SuiteMetricsLogger(SuiteCallback):
    def __init__(
        self,
        logger,
        every_n_instances: int = 10,
        use_wandb: bool = False,
    ) -> None:
        """
        Args:
            logger: A Lightning logger (``CSVLogger`` or ``WandbLogger``).
            every_n_instances: Log running counts every n instances. Default: ``10``.
            use_wandb: If ``True``, also attach a summary table to the wandb run.
        """
        super().__init__()
        self.logger = logger
        self.every_n_instances = every_n_instances
        self.use_wandb = use_wandb
        self.step = 0
        self.rows = []

    @rank_zero_only
    def on_instance_end(self, suite, index, record):
        self.step += 1
        if index % self.every_n_instances == 0:
            metrics = {"{}/{}".format(suite, k): float(v) for k, v in record.items()
                       if isinstance(v, (int, float, bool))}
            self.logger.log_metrics(metrics, step=self.step)

    @rank_zero_only
    def on_suite_end(self, suite, summary):
        self.step += 1
        metrics = {"{}/{}".format(suite, k): float(v) for k, v in summary.items()
                   if isinstance(v, (int, float, bool))}
        self.logger.log_metrics(metrics, step=self.step)
        self.rows.append([suite, summary.get("checked", 0), summary.get("mismatches", 0),
                          summary.get("elapsed_ms", 0.0)])
        if self.use_wandb:
            import wandb
            table = wandb.Table(columns=["suite", "checked", "mismatches", "elapsed_ms"], data=self.rows)
            self.logger.experiment.log({"crosscheck": table})
        self.logger.save()


class ReplayWriter(SuiteCallback):
    """Writes every mismatching instance as a problem file that ``solve`` can replay."""

    def __init__(self, replay_dir: Optional[str]) -> None:
        super().__init__()
        self.replay_dir = Path(replay_dir) if replay_dir else None
        self.written = []

    @rank_zero_only
    def on_mismatch(self, suite, index, problem, detail):
        if self.replay_dir is None:
            return
        self.replay_dir.mkdir(parents=True, exist_ok=True)
        path = self.replay_dir / "{}-{:04d}.txt".format(suite, index)
        path.write_text("# {}\n{}".format(detail.replace("\n", " "), format_problem(problem)))
        self.written.append(path)
        print("Wrote replay file {}".format(path))
