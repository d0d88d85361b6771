"""Exact lattice models of locally covariant field theories and their dynamical nets."""
from .lattice import (DomainError, Interval, InvalidMorphism, LatticeSpacetime, NotAMultiDiamond, Point, Region,
                      SpacetimeMorphism, causal_complement, causal_future, causal_hull, causal_past, compose,
                      diamond, domain_of_dependence, enumerate_Kb, is_cauchy_morphism, is_causally_convex,
                      make_interpolating_chain, multi_diamond, wedge_regions)
from .subobjects import (DataSpace, LinearMorphism, MorphismError, Subspace, equalizer, factor_through, intersect,
                         is_trivial, subobject_iso, subobject_leq, union)
from .kg import KGTheory, SolutionSpace, TestFunction, advanced, causal_propagator, pairing, retarded
from .rce import Perturbation, rce, rce_covariance_check, rce_generator, rce_independence_check, tau
from .nets import (Caps, bullet_subspace, check_dynamical_locality, check_extended_locality, dynamical_subspace,
                   kinematic_value, vanishing_oracle)
from .theory import (DiagonalTheory, LabelFunctor, NaturalTransformation, PowerTheory, ProbeFamily, Theory,
                     TrivialTheory, classify, label_threshold, label_wrap, pad, standard_probe_family)
from .spass import diagonal_dynamics_checks, spass_counterexample, spass_meta_check

__version__ = "0.1.0"
