"""Central tolerance table used by the verification suites and the CLI.

The defaults are pinned for the benchmark configuration (golden-ratio
alpha, one-harmonic conjugator, block and mode bounds 16, grid 256).
``resolve`` merges user overrides and an optional global scale factor.
"""

from __future__ import annotations

DEFAULTS: dict[str, float] = {
    "weyl_relation": 1e-14,
    "star_associativity": 1e-12,
    "star_traciality": 1e-12,
    "cocycle": 1e-9,
    "growth_normalization": 1e-9,
    "rotation_number": 1e-6,
    "state_routes": 1e-9,
    "gram": 1e-14,
    "u_kl_vacuum": 1e-8,
    "homomorphism": 1e-10,
    "tomita": 1e-7,
    "tomita_rotation": 1e-9,
    "borel": 1e-9,
    "paren_routes": 1e-7,
    "parseval": 1e-12,
    "hausdorff_young_endpoint": 1e-12,
    "classical_limit": 1e-10,
    "wts_generators": 1e-12,
    "wts_random": 1e-10,
    "fejer_ratio_low": 0.3,
    "fejer_ratio_high": 0.7,
    "transference_integral": 1e-9,
    "dirichlet_band": 0.2,
    "dirichlet_table": 1e-8,
    "dirac_master": 1e-7,
    "dirac_master_rotation": 1e-12,
    "dirac_bound_slack": 1e-6,
    "telescoping": 1e-12,
    "corner_adjoint": 1e-9,
    "reprojection_tail": 1e-6,
}


def resolve(overrides: dict[str, float] | None = None, scale: float = 1.0) -> dict[str, float]:
    """Return the tolerance table with ``overrides`` applied, then scaled.

    Band edges (``fejer_ratio_*``) and the Dirichlet band are structural
    and are never scaled; everything else multiplies by ``scale``.
    """
    table = dict(DEFAULTS)
    if overrides:
        unknown = sorted(set(overrides) - set(table))
        if unknown:
            raise KeyError(f"unknown tolerance names: {', '.join(unknown)}")
        table.update({k: float(v) for k, v in overrides.items()})
    if scale != 1.0:
        unscaled = {"fejer_ratio_low", "fejer_ratio_high", "dirichlet_band"}
        for key in table:
            if key not in unscaled:
                table[key] *= scale
    return table
