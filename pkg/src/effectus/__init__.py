"""Executable effect algebras, effect monoids, modules and effectus instances over exact arithmetic."""

from .algebra import (
    FiniteEffectAlgebra,
    FinitePcm,
    Violation,
    boolean_algebra,
    chain,
    check_effect_algebra_axioms,
    check_pcm_axioms,
    check_sigma_pam_axioms,
    trivial,
    two,
)
from .category import EModOp, Pfn, RationalWMod, WMod
from .modules import (
    FiniteEffectModule,
    FiniteWeightModule,
    RationalEffectModule,
    RationalWeightModule,
    check_effect_module_axioms,
    check_weight_module_axioms,
)
from .monoid import (
    FiniteEffectMonoid,
    RationalUnitInterval,
    boolean_meet_monoid,
    check_effect_monoid_axioms,
    geometric_normalizer,
    two_monoid,
)

__version__ = "0.1.0"
