"""Exact combinatorial invariants of typed Borel-orbit graphs."""

from .errors import (Cor1Violation, DimensionMismatch, GraphParseError,
                     GroupTooLarge, InductionInconsistent, InvalidGraph,
                     LemmaViolation, NonFiniteType, NotMaximalRank,
                     NotRational, NotReflectionGroup, RankMismatch,
                     SphorbError, StabilizerNotSemidirect,
                     WildCaseUnsupported)
from .intertwine import (ZERO, CompositionResult, IntertwinerSymbol, Zero,
                         compose_simple, compose_word, fixed_set,
                         hecke_generic_rank, invariant_degrees,
                         nonvanishing_set, open_symbol, reflection_count)
from .lattice import (FiniteAbelianInvariants, LocalFieldParams, Sublattice,
                      full_lattice, h1_order, hermite_form,
                      lattice_intersection, lattice_sum, quotient_invariants,
                      saturation, smith_invariants, smith_normal_form,
                      transport, zero_lattice)
from .orbitgraph import (Finding, OrbitGraph, OrbitNode, RootEdge,
                         ValidationReport, ensure_validated, knop_apply,
                         knop_simple, make_edge, rational_orbit_count,
                         stabilizer, validate)
from .rootdata import (RootDatum, WeylElement, WeylGroup, apply,
                       build_root_datum, enumerate_weyl, min_coset_reps,
                       parse_word, rho, word_str)
from .spherical import (AffineCharacterCoset, SphericalInvariants,
                        admissible_coset, bad_divisors, build_group_case,
                        build_horospherical_full, build_parabolic_induction,
                        build_sl2, build_sl2_on, compute_invariants,
                        doubled_datum, levi_subdatum, open_orbit_coset,
                        sl2_datum, type_g_roots)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
