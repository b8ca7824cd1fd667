"""Finite-variation criteria and path simulation for mixed moving averages."""

from .criteria import MixedModel, canonical_models, expected_bv_bound, verdict, zero_one_classify
from .kernels import Fractional, Indicator, KernelPair, PiecewiseLinear, SmoothBump, WeierstrassBump
from .noise_models import FiniteAtoms, MixedNoise, NoiseComponent, Stable, TabulatedTail, TemperedStable
from .numerics import SeedSpec
from .simulate import SimPlan, mc_expected_variation, sample_path, verify_L1_sandwich, zero_one_experiment

__all__ = [
    "MixedModel", "canonical_models", "expected_bv_bound", "verdict", "zero_one_classify",
    "Fractional", "Indicator", "KernelPair", "PiecewiseLinear", "SmoothBump", "WeierstrassBump",
    "FiniteAtoms", "MixedNoise", "NoiseComponent", "Stable", "TabulatedTail", "TemperedStable",
    "SeedSpec", "SimPlan", "mc_expected_variation", "sample_path", "verify_L1_sandwich",
    "zero_one_experiment",
]
