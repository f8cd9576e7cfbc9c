"""Combinatorics of twisted conjugacy classes in simple algebraic groups."""

from .errors import BudgetExceededError
from .rootsys import (CartanType, DiagramAut, RootSystem, bad_primes, build,
                      diagram_auts, highest_root, perp, reflect, subsystem)
from .twist import (ClassProfile, StepType, TwistedSetting,
                    enumerate_twisted_involutions, is_twisted_identity,
                    is_twisted_involution, pi_of, profile,
                    roots_classification, step_type, theta_on_w,
                    twisted_identity_witness, wc_candidates)
from .weyl import (WeylElement, bruhat_leq, enumerate_weyl, from_word,
                   longest_element, mult, reduced_word, weyl_order)

__all__ = [
    "BudgetExceededError",
    "CartanType", "DiagramAut", "RootSystem", "bad_primes", "build",
    "diagram_auts", "highest_root", "perp", "reflect", "subsystem",
    "ClassProfile", "StepType", "TwistedSetting",
    "enumerate_twisted_involutions", "is_twisted_identity",
    "is_twisted_involution", "pi_of", "profile", "roots_classification",
    "step_type", "theta_on_w", "twisted_identity_witness", "wc_candidates",
    "WeylElement", "bruhat_leq", "enumerate_weyl", "from_word",
    "longest_element", "mult", "reduced_word", "weyl_order",
]

__version__ = "0.1.0"
