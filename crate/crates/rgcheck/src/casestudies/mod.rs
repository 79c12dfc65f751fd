//! Builders for the queue and stack specifications, instruction-level
//! implementation models, and conformance checking.

mod builders;
mod conformance;
mod lts;
mod scenario;

pub use builders::{
    bounded_queue_await_spec, bounded_queue_terminate_spec, multi_client_terminate_spec,
    queue_decls, queue_spec_srsw, stack_decls, stack_explicit_spec, stack_terminate_spec,
    Fairness, OpSpecs,
};
pub use conformance::{
    conformance, thread_viewpoint, window_projections, ConformanceError, ConformanceFailure,
    ConformanceOutcome, OpWindow,
};
pub use lts::{
    check_invariant, explore, final_data_values, lock_queue_impl,
    lock_queue_impl_no_capacity_check, treiber_impl, treiber_impl_no_empty_check, ExploreConfig,
    ExploreError, Guard, Instr, Lts, LtsError, OpInstance, OpKind, Run, SysStep, ThreadProgram,
    Update,
};
pub use scenario::{parse_scenario, Scenario, ScenarioError};
