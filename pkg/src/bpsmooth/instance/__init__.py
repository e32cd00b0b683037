from .models import BipartiteInstance, Edge, FlowEdge, FlowNetwork, IntegerFlow, Matching, matching_to_flow
from .validation import validate, validate_flow, validate_matching, zero_complete
from .io import read_instance, read_instance_file, write_instance, write_instance_file
