pub mod algebra;
pub mod cocycles;
pub mod cohomology;
pub mod cyclo;
pub mod datum;
pub mod linalg;
pub mod oracle;
pub mod records;
pub mod resolution;
pub mod roots;
