from .network import TensorNetwork, TensorNode, EdgeInfo, circuit_to_network, make_bind
from .simplify import simplify

__all__ = ["TensorNetwork", "TensorNode", "EdgeInfo", "circuit_to_network",
           "make_bind", "simplify"]
