pub mod contact;
pub mod curvature;
pub mod expr;
pub mod fixtures;
pub mod flow;
pub mod frame;
pub mod linalg;
pub mod residual;
pub mod soliton;
