//! Elliptic curves over Q(√−3)(σ): the group law, twists, 2-divisibility,
//! torsion, and heights of sections on the k = 18 elliptic K3 surface.

pub mod curve;
pub mod fixtures;
pub mod height;
pub mod neron;
pub mod suite;
pub mod torsion;
pub mod twist;

pub use curve::{ec_add, ec_mul, ec_neg, verify_on_curve, CoordinateChange, FunctionFieldCurve, SectionPoint};
pub use fixtures::{fixture, fixture_names, Fixture};
pub use height::{
    contribution, fiber_type, finite_euler_number, height, height_breakdown, total_contribution, zero_intersection,
    FiberTransform, FiberType, HeightBreakdown, NeronFiberData,
};
pub use neron::{
    neron_component_check, p_sigma, y18_height, y18_model, y18_rho6, y18_transcripts, Check, NeronTranscript, Y18Fiber,
    CHI,
};
pub use suite::{section_suite, SectionSuite, SuiteCheck, Y18_TRANSCENDENTAL_DET};
pub use torsion::{torsion_fixture_identities, torsion_order, verify_nontorsion, TorsionIdentity, TORSION_BOUND};
pub use twist::{
    can_halve, can_halve_with_root, complete_square, quadratic_twist, to_b_form_point, BForm, HalvingCertificate,
    QuadraticTwist,
};
