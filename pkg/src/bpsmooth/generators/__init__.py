from .density import DensityPiece, DensitySpec, event_phi_densities
from .families import (BipartiteFamily, Custom, CustomEdge, EventK22, FamilySpec, GadgetCopies,
                       RandomFlow, SmoothedKnn, UniformK22, UniformKnn, family_adapter)
from .sampling import (dense_weights, derived_seed, sample, sample_custom, sample_flow,
                       sample_weights, to_instance, uniform_stream)
from .events import (check_event_E, check_event_E_phi, event_hits, event_phi_slack,
                     event_slack, subgraph_weights)
