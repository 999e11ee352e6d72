pub mod certifier;
pub mod complex;
pub mod exact;
pub mod forge;
pub mod group;
pub mod format;
pub mod lifter;
pub mod manifest;
pub mod pipeline;
