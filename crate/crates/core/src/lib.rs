//! Biseriality of finite-dimensional quotients of path algebras over prime
//! fields: Fuller's definition, idempotent-subalgebra reductions, bisected
//! presentations and D4 obstructions, each with checkable witnesses.

pub mod algebra;
pub mod biserial;
pub mod bisected;
pub mod criteria;
pub mod generate;
pub mod instance;
pub mod linalg;
pub mod module;
pub mod quiver;
pub mod report;
pub mod subalgebra;

pub use algebra::{AlgebraError, FiniteDimAlgebra, Presentation, Relation};
pub use biserial::{is_biserial_fuller, is_nakayama, is_special_biserial, BiserialError, FullerCertificate, Side};
pub use bisected::{search_bisected, verify_bisected_witness, verify_corollary_form, BisectedWitness, DTable};
pub use criteria::{
    certify_obstruction, decide_biserial, lem2_check, neighbor_sets, subalgebra_criterion, Decision, DecideOptions,
    Lem2Direction, NeighborVariant, ObstructionWitness, Witness,
};
pub use generate::{generate_corollary_instance, generate_random_presentation, GenerateParams};
pub use instance::{parse_instance, print_instance, Instance, InstanceError, InstanceOptions};
pub use linalg::{Field, LinalgError, Matrix, Subspace};
pub use module::{Projective, Representation};
pub use quiver::{ArrowId, Bisection, Path, Quiver, QuiverError, VertexId};
pub use report::{replay_report, run_check, Report};
pub use subalgebra::{idempotent_subalgebra, SubalgebraPresentation};
