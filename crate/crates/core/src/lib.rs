pub mod exactnum;
pub mod linalg;
pub mod qpoly;
pub mod factor;
pub mod findim;
pub mod grading;
pub mod loops;
pub mod fixtures;
pub mod centroid_loop;
pub mod typing;
