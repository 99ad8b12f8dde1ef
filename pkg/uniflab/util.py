import os, time, random
import regex

_NATURAL_SPLIT = regex.compile(r"(\d+)")

FRESH_PREFIX = "_v"
SEED_ENV = "UNIFLAB_SEED"
DEFAULT_SEED = 42


def exists(val):
    return val is not None


def natural_key(name):
    """Sort key that orders ``x2`` before ``x10``."""
    parts = _NATURAL_SPLIT.split(name)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p != "")


def resolve_seed(seed=None):
    if exists(seed):
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return DEFAULT_SEED


class FreshNames(object):
  """Counter for generated variable names.

  Names carry the reserved ``_v`` prefix, which the parser rejects in user
  input, so they never clash with problem variables.

  Args:
    prefix: Prefix placed in front of the running counter.
    taken: Names that must be skipped.
  """

  def __init__(self, prefix=FRESH_PREFIX, taken=()):
    self._prefix = prefix
    self._taken = set(taken)
    self._count = 0

  def __call__(self):
    while True:
      self._count += 1
      name = "{}{}".format(self._prefix, self._count)
      if name not in self._taken:
        self._taken.add(name)
        return name


class InstanceStream(object):
  """Iterator which returns a fixed number of random instances.

  Stands in for a dataset when a crosscheck suite needs generated inputs.

  Args:
    factory: Callable taking a ``random.Random`` and returning one instance.
    sample_count: The maximum number of instances to be returned.
    seed: Seed for the stream's private generator.
  """

  def __init__(self, factory, sample_count, seed=DEFAULT_SEED):
    self._factory = factory
    self._sample_count = sample_count
    self._seed = seed
    self._rng = random.Random(seed)
    self._count = 0

  def __iter__(self):
    return InstanceStream(self._factory, self._sample_count, self._seed)

  def __len__(self):
    return self._sample_count

  def __next__(self):
    return self.next()

  def next(self):
    if self._count >= self._sample_count:
      raise StopIteration
    self._count += 1
    return self._factory(self._rng)


class Stopwatch(object):
    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed_ms = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed_ms = (time.perf_counter() - self.start) * 1000.0
        return False


class UniflabError(Exception):
    """Root of every error raised by the workbench."""


class TermSyntaxError(UniflabError):
    def __init__(self, message, position=None):
        self.message = message
        self.position = position
        super().__init__(self.__str__())

    def __str__(self):
        if exists(self.position):
            return "{} at position {}".format(self.message, self.position)
        return self.message


class SignatureError(UniflabError):
    pass


class UnsupportedProblem(UniflabError):
    pass


class VerificationError(UniflabError):
    """A backend returned a unifier the rewrite engine rejects."""


class SizeCapExceeded(UniflabError):
    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__("{} has size {} above the cap of {}".format(what, size, cap))


class InstanceFormatError(UniflabError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if exists(path):
            where = "{}:{}: ".format(path, line) if exists(line) else "{}: ".format(path)
        super().__init__(where + message)
