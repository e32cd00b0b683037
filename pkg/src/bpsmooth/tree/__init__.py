from .build import CompTree, build_tree, write_dot
from .matching import (TMatching, brute_force_t_matching, k22_root_values, light_edge_audit,
                       max_t_matching, root_values)
