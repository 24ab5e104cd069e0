pub mod construct;
pub mod criterion;
pub mod ff;
pub mod numtheory;
pub mod oracle;
pub mod poly;
pub mod reduce;
pub mod search;
