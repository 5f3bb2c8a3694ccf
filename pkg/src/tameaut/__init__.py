"""Exact computations with tame automorphisms of commutative and free associative algebras."""

from .coeffs import QQ, FieldSpec, LaurentRing, LaurentScalar
from .endo import (Endo, compose, conjugate, exact_inverse, filtration, group_commutator,
                   jacobian_det, jet_invert, product)
from .errors import (ContextMismatch, DivisionByZero, FieldMismatch, FlavorError, InvalidField,
                     NoPlan, NotElementary, NotInvertible, ParseError, PoleAtZero, ShapeError,
                     SingularSystem, SpanDeficiency, SynthesisError, TameAutError)
from .polyalg import Poly, PolyContext, StarProduct, associator, commutator, format_poly, star
from .tameword import (Generator, GenWord, expand, expand_jet, express_in_power_basis, height,
                       invert_word, synth_edge, synth_elementary, synth_nc_elementary,
                       synth_power, torus_normalize)
from .textio import format_endo, format_word, parse_endo, parse_poly, parse_word
from .torus import (DiagonalAction, centralizer_check, singularity_valuation, torus_conjugate)
from .approx import (ApproxTrace, HikingPlan, classify_nice, divergence, hiking_product,
                     hiking_solve, inclusion_exclusion_check, nagata, peel_step,
                     tame_approximate)
from .suites import SuiteResult, run_suite

__version__ = "0.1.0"
