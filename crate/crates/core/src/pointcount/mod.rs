//! Point counts of Y_k over F_p and the coefficients A_p of its transcendental L-function.

pub mod cache;
pub mod fibers;
pub mod field;
pub mod weierstrass;

pub use cache::{a_p_cached, a_p_range, ApCache, CACHE_ENV};
pub use fibers::{
    a_p, a_p_default, bad_primes, count_fiber_points, count_fiber_points_with, fiber_count, fiber_counts,
    fiber_weierstrass, surface_data, ApValue, Chart, CountMode, FiberCount, SurfaceData, P1,
};
pub use field::{legendre, PrimeField};
pub use weierstrass::{count_weierstrass, PointModP, WeierstrassModP};
