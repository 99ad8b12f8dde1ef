from uniflab.modules.oracles.instances import CnfFormula, NaeInstance, Graph, is_proper_coloring
from uniflab.modules.oracles.search import backtrack_search
from uniflab.modules.oracles.brute import (
    brute_sat, sat_assignment, brute_nae, nae_assignment, brute_coloring, coloring,
    ground_terms, brute_ground_search,
)
