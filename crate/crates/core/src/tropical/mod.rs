//! Max-plus tropical checks, Bergman fans of matroids and their link graphs.

mod fan;
mod graph;
mod relations;
mod value;

pub use fan::{bergman_chart, fan_point, FanChart};
pub use graph::{link_graph, smooth_degree2, Graph};
pub use relations::{
    in_bergman_fan, in_trop_linear_space, matroid_plucker, plucker_from_labeled, trop_incidence_check,
    trop_plucker_check, valuated_circuits,
};
pub use value::{max_attained_twice, TropPluecker, TropValue};
