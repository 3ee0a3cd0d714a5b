"""Link-level OTFS simulator with two delay-Doppler receiver chains.

Information symbols live on an M x N delay-Doppler grid. The transmitter maps
them to time-frequency symbols (ISFFT), then to a time signal (Heisenberg
transform with rectangular pulses). The receiver converts back either in two
steps (Wigner transform + SFFT, the OFDM-compatible route) or directly by
sampling the Zak transform of the received signal. Both routes have exact
analytic effective channel matrices; the package builds them, validates them
against sample-level pipelines, and compares the receivers' achievable
spectral efficiency on a very-high-mobility aeronautical channel.
"""

from .grid import (
    GridConfig,
    DDGrid,
    TFGrid,
    TimeSamples,
    ChannelPath,
    PathSet,
    ChannelKind,
    EffectiveChannel,
    LinkBudget,
    vec_index,
    unvec_index,
    make_rng,
    complex_normal,
    db_to_lin,
    lin_to_db,
)
from .zak import (
    DDPoint,
    snapped_floor,
    zak_rect_pulse,
    dirichlet_doppler,
    dirichlet_delay,
    dd_basis,
    discrete_zak,
)
from .modulate import isfft, sfft, heisenberg_samples, transmit_waveform
from .channel import (
    channel_waveform,
    apply_channel,
    add_noise,
    two_step_entry,
    zak_entry,
    build_two_step_matrix,
    build_zak_matrix,
    two_step_factors,
    zak_factors,
    factored_gram,
    factored_doppler_sum_gram,
    NoiseCovariance,
    noise_cov_apply_inverse,
)
from .receive import (
    wigner,
    two_step_receive,
    zak_receive,
    zak_receive_ops,
    two_step_receive_ops,
)
from .capacity import (
    SEKind,
    SEResult,
    SinglePathForms,
    logdet_hpd,
    se_two_step,
    se_zak_exact,
    se_zak_approx,
    single_path_closed_forms,
)
from .uas import (
    SPEED_OF_LIGHT,
    UASConfig,
    SweepResult,
    sample_uas_channel,
    sweep_speed,
    sweep_rho,
    resolve_workers,
)
from .validate import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "GridConfig",
    "DDGrid",
    "TFGrid",
    "TimeSamples",
    "ChannelPath",
    "PathSet",
    "ChannelKind",
    "EffectiveChannel",
    "LinkBudget",
    "vec_index",
    "unvec_index",
    "make_rng",
    "complex_normal",
    "db_to_lin",
    "lin_to_db",
    "DDPoint",
    "snapped_floor",
    "zak_rect_pulse",
    "dirichlet_doppler",
    "dirichlet_delay",
    "dd_basis",
    "discrete_zak",
    "isfft",
    "sfft",
    "heisenberg_samples",
    "transmit_waveform",
    "channel_waveform",
    "apply_channel",
    "add_noise",
    "two_step_entry",
    "zak_entry",
    "build_two_step_matrix",
    "build_zak_matrix",
    "two_step_factors",
    "zak_factors",
    "factored_gram",
    "factored_doppler_sum_gram",
    "NoiseCovariance",
    "noise_cov_apply_inverse",
    "wigner",
    "two_step_receive",
    "zak_receive",
    "zak_receive_ops",
    "two_step_receive_ops",
    "SEKind",
    "SEResult",
    "SinglePathForms",
    "logdet_hpd",
    "se_two_step",
    "se_zak_exact",
    "se_zak_approx",
    "single_path_closed_forms",
    "SPEED_OF_LIGHT",
    "UASConfig",
    "SweepResult",
    "sample_uas_channel",
    "sweep_speed",
    "sweep_rho",
    "resolve_workers",
    "CheckResult",
    "run_checks",
    "__version__",
]
