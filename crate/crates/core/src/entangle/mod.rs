//! Entangled-photon PPMs over two analyzer settings.
//!
//! The torus family pairs a Bell state with linear analyzers; the sphere
//! family pairs the singlet with elliptical analyzers parametrized by points
//! of the Poincaré sphere. Both come with closed forms, generating quantum
//! models, and bipartite layouts for the no-signaling, local-reach, and
//! marginal checks in [`crate::measure`].

mod sphere;
mod states;
mod torus;

pub use sphere::{
    angle_zeta, cube_vertex_grid, lat_long_grid, orbit_rotation, sphere_correlation, sphere_domain, sphere_family,
    sphere_layout, sphere_model, sphere_point, sphere_ppm, zeta_weights, OrbitResult, Rotation3, SpherePairPoint,
    SpherePoint, ORBIT_MAP,
};
pub use states::{bell_state, elliptical_povm, linear_povm, product_povm, side_space, singlet_state};
pub use torus::{
    contour_export, correlation_e, marked_points, s_bell, s_bell_maximize, torus_domain, torus_family, torus_grid,
    torus_layout, torus_model, torus_ppm, torus_side_grid, write_contour_csv, BellMax, BellSearch, BellSetting,
    ContourRow, TorusPoint, CONTOUR_HEADER, REFINE_ITERATIONS, REFINE_SHRINK,
};
