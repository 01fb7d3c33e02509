pub mod bench;
pub mod par;
pub mod pddl;
pub mod planners;
pub mod report;
pub mod validate;
pub mod world;
