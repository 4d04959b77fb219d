"""Acyclic and stratified comprehension: formula analysis toolkit.

Submodules: ``syntax`` (parsing and normalization), ``depgraph``
(acyclicity), ``stratify`` (type constraints), ``pathtyper`` (typing along
unique paths), ``modelcheck`` (finite models), ``corpus`` (bundled
definitions), ``generator`` (random formulas) and ``cli``.
"""
from .depgraph import build_graph, components, find_cycle, is_acyclic, is_acyclic_chain, to_dot
from .pathtyper import NotAcyclicError, type_acyclic, verify_uniqueness
from .stratify import TypeAssignment, UnsatCertificate, check_assignment, check_certificate
from .syntax import ComprehensionInstance, check_instance, desugar, free_vars, normalize, parse, pretty, rectify

__version__ = "0.1.0"
