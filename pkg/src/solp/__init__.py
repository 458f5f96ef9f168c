"""Social logic programming: parse, solve, compile and cross-check agent collections."""

from .model import Atom, Collection, LabeledAtom, Program, Rule, SocialCondition
from .parser import parse_collection, print_collection
from .social import Semantics, enumerate_social_models

__all__ = [
    "Atom",
    "Collection",
    "LabeledAtom",
    "Program",
    "Rule",
    "SocialCondition",
    "Semantics",
    "enumerate_social_models",
    "parse_collection",
    "print_collection",
]
__version__ = "0.1.0"
