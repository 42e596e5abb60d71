"""Identity verifiers for circle maps and planar maps."""

from .circle import (
    FourierData, FourierRelation, stationarity_report, el_residual_report,
    poho_s1, poho_s1_first, fourier_relations, fourier_relation_alpha,
    low_order_relations, pohozaev_series, mobius_invariance_suite, poho_r,
)
from .planar import (
    HoloField, ConjugateField, QuadratureConfig, QuadratureError,
    hypothesis_residual, hypothesis_report, ball_pohozaev, ball_pohozaev_radial,
    ball_pohozaev_normal, gaussian_pohozaev,
)

__all__ = [
    'FourierData', 'FourierRelation', 'stationarity_report', 'el_residual_report',
    'poho_s1', 'poho_s1_first', 'fourier_relations', 'fourier_relation_alpha',
    'low_order_relations', 'pohozaev_series', 'mobius_invariance_suite', 'poho_r',
    'HoloField', 'ConjugateField', 'QuadratureConfig', 'QuadratureError',
    'hypothesis_residual', 'hypothesis_report', 'ball_pohozaev', 'ball_pohozaev_radial',
    'ball_pohozaev_normal', 'gaussian_pohozaev',
]
