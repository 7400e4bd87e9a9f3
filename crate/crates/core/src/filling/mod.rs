//! Null-homotopy witnesses: certificates, fillers, the area oracle and van
//! Kampen diagrams.

pub mod certificate;
pub mod diagram;
pub mod families;
pub mod fill;
pub mod gc_fill;
pub mod oracle;
pub mod regions;

pub use certificate::{relator_shortcut, FillingCertificate, Rewriter};
pub use diagram::{certificate_to_diagram, grid_fill_commutator, min_diameter_filling, VanKampenDiagram};
pub use families::{
    build_wn_gamma, build_wn_j, central_power_word, corridor_lower_bound, dehn_lower_bound_value,
    isodiam_lower_bound_value, kill_all_but, Bound,
};
pub use fill::{fill_amalgam, fill_in_factor, fill_word};
pub use gc_fill::{gc_fill, gc_fill_in};
pub use oracle::{area_oracle, oracle_certificate, AreaOracle};
pub use regions::{annular_example, check_region_shapes, dual_arc_tree, monochromatic_regions, MonochromaticDecomposition};
