"""Labeled tableaux for the Lambek-Grishin calculus."""
from .syntax import Atom, Binary, Sign, SignedFormula, parse_formula, print_formula, parse_signed
from .structure import Box, Condition, Family, Labeled, Tree, parse_box, print_box, sequent_box
from .tableau import Proof, NotProvable, Prover, prove, prove_sequent
from .checker import check_proof

__version__ = "0.1.0"
