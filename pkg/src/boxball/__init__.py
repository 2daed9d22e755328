"""Box-ball system: dynamics, solitons, slot decomposition, measures, speeds."""

from .config import (
    BoxBallError,
    Excursion,
    NotRecordClosedError,
    ParseError,
    RecordIndex,
    Walk,
    apply_T,
    apply_T_carrier,
    apply_T_reflect,
    as_config,
    ball_count,
    close_config,
    density,
    evolve,
    excursions,
    format_config,
    is_record,
    lift,
    lift_anchored,
    parse_config,
    records,
)
from .measures import (
    ComponentLaw,
    DensityEstimate,
    Dist,
    MeasureError,
    SampleBatch,
    estimate_densities,
    inverse_palm_shift,
    palm_condition,
    sample_append_mix,
    sample_bernoulli,
    sample_components,
    sample_hat_mu,
)
from .raster import OverlaySegment, RenderError, SpaceTimeRaster, build_raster, render
from .rebuild import (
    ComponentCursor,
    RebuildError,
    n_slots_in_excursion,
    reconstruct,
    reconstruct_config,
    reconstruct_excursion,
    strip_solitons,
)
from .slots import (
    RECORD_ORDER,
    FlowReport,
    ShiftReport,
    SlotComponents,
    SlotConfig,
    SlotError,
    SlotTable,
    components,
    enumerate_slots,
    slot_configuration,
    soliton_flow,
    tagged_slot,
    verify_component_shift,
)
from .solitons import (
    Soliton,
    SolitonSet,
    SolitonTrackingError,
    identify_batch,
    identify_stream,
    match_sets,
    pair_one_step,
)
from .speeds import (
    EmpiricalSpeeds,
    SpeedSystemError,
    SpeedTable,
    TrajectorySet,
    WindowMarginError,
    consistency_residuals,
    empirical_speeds,
    solve_explicit,
    solve_interaction,
    solve_vertical,
    track_trajectories,
)

__version__ = "0.1.0"
