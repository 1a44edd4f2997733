pub mod distance;
pub mod dynamics;
pub mod error;
mod eval;
pub mod game;
pub mod instances;
pub mod io;
pub mod nearby;
pub mod partition;
pub mod rational;
pub mod repair;
pub mod simseq;
pub mod stability;
pub mod update;

pub use distance::partition_distance;
pub use dynamics::{run_dynamics, DynamicsStep, DynamicsTrace, Policy};
pub use error::{Error, Result};
pub use game::{BlockGameBuilder, ClassTag, Game};
pub use nearby::{
    enumerate_all_stable, enumerate_within, nearest_stable, nearest_stable_in, nearest_stable_up_to_symmetry, AlteredInstance, SearchOutcome,
};
pub use instances::{
    build_fig3_tight, build_fig4_cycle, build_fig5_updown, compile, compile_setcover, compile_x3c, gen_random_game,
    verify_correspondence, CorrespondenceReport, CoverInstance, CoverVariant, GadgetBundle, Reduction, ReductionParams,
    UpDownGadget, ValueFn, VerifyMode,
};
pub use partition::{Partition, SetPartitions, Target};
pub use rational::Rational;
pub use repair::{
    cis_repair, close_cns, decide_cis_111_sym, decide_cns_111_sym_one_negative, BoundKind, RepairReport,
};
pub use simseq::{
    gen_update_sequence, potential_audit, run_sequence, PotentialAudit, RepairPolicy, SequenceReport, StepRecord,
    UpdateSequence,
};
pub use stability::{
    classify_deviation, enumerate_deviations, is_stable, social_welfare, utility, ClassifiedDeviation, Kinds,
    StabilityNotion,
};
pub use update::{apply_update, UpdateEvent};
