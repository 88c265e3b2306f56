"""Bryant soliton: normalization, soliton equations, curvature decay and PIC2."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from neck_lab.core.types import PICMode, Suite
from neck_lab.curvature.isotropic import min_isotropic
from neck_lab.flows.bryant import BryantSoliton, scalar_decay_ratio, shoot_bryant
from neck_lab.flows.warped import soliton_residual, warped_curvatures, warped_operator
from neck_lab.inputs.schemas import SuiteConfig
from neck_lab.reporting.export import bryant_frame
from neck_lab.reporting.report import Case, Relation, judge
from neck_lab.suites.base import CaseSpec

NORMALIZATION_ANCHOR = "normalization R + |grad f|^2 = 1 of the Bryant soliton"
DECAY_ANCHOR = "linear decay of the Bryant soliton curvature"
PIC2_ANCHOR = "strict PIC2 of the Bryant soliton"

TIP_EXCLUSION = 0.1
DECAY_START = 10.0
TABLE_SPACING = 0.1
PIC2_REFINE_STEPS = 50


@lru_cache(maxsize=4)
def _shoot(n: int, z_max: float, dz: float) -> BryantSoliton:
    return shoot_bryant(n, z_max, dz=dz)


def _soliton(config: SuiteConfig) -> BryantSoliton:
    return _shoot(config.n, config.grid.bryant_z_max, config.grid.bryant_dz)


def check_normalization(config: SuiteConfig) -> list[Case]:
    """R + f'^2 = 1 on the whole profile and Ric = D^2 f away from the tip."""
    tol = config.effective_tolerances()
    soliton = _soliton(config)
    conserved = float(np.max(np.abs(soliton.conserved - 1.0)))
    radial, sphere = soliton_residual(soliton.profile)
    mask = soliton.profile.z[1:-1] >= TIP_EXCLUSION
    residual = float(max(np.max(np.abs(radial[mask])), np.max(np.abs(sphere[mask]))))
    stride = max(1, round(TABLE_SPACING / soliton.profile.dz))
    table = bryant_frame(soliton.profile).iloc[::stride].reset_index(drop=True)
    return [
        judge(
            "bryant.conserved",
            conserved,
            0.0,
            tol.bryant_conserved,
            NORMALIZATION_ANCHOR,
            Relation.AT_MOST,
            table=table,
        ),
        judge(
            "bryant.soliton_residual",
            residual,
            0.0,
            tol.soliton_residual,
            NORMALIZATION_ANCHOR,
            Relation.AT_MOST,
        ),
    ]


def check_decay(config: SuiteConfig) -> list[Case]:
    """R z stays within a bounded ratio C/c on [10, z_max]."""
    tol = config.effective_tolerances()
    ratio = scalar_decay_ratio(_soliton(config), z_min=DECAY_START)
    spread = float(ratio.max() / ratio.min()) if ratio.min() > 0 else float("nan")
    case = judge("bryant.decay_ratio", spread, tol.decay_ratio, 0.0, DECAY_ANCHOR, Relation.AT_MOST)
    return [case._replace(detail=f"R z in [{ratio.min():.6g}, {ratio.max():.6g}]")]


def check_pic2(config: SuiteConfig) -> list[Case]:
    """Minimum PIC2 is positive at log-spaced points between the tip and z_max."""
    soliton = _soliton(config)
    curv = warped_curvatures(soliton.profile)
    heights = np.geomspace(TIP_EXCLUSION, curv.z[-1], config.grid.bryant_samples)
    indices = np.unique(np.searchsorted(curv.z, heights).clip(0, curv.z.size - 1))
    worst = np.inf
    for index in indices:
        op = warped_operator(config.n, float(curv.k_rad[index]), float(curv.k_sph[index]))
        value = min_isotropic(
            op,
            PICMode.PIC2,
            budget=config.grid.frame_budget,
            seed=config.seed,
            refine_steps=PIC2_REFINE_STEPS,
        ).value
        worst = min(worst, value)
    case = judge("bryant.min_pic2", worst, 0.0, 0.0, PIC2_ANCHOR, Relation.AT_LEAST)
    return [case._replace(detail=f"{indices.size} points sampled")]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("bryant.normalization", NORMALIZATION_ANCHOR, check_normalization),
    CaseSpec("bryant.decay_ratio", DECAY_ANCHOR, check_decay),
    CaseSpec("bryant.min_pic2", PIC2_ANCHOR, check_pic2),
)

SUITE = Suite.BRYANT
