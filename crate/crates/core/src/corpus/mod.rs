//! Reference frameworks with known behavior and random singular generators.

pub mod canonical;
pub mod generator;
pub mod path;

pub use canonical::{canonical_entries, entry, CorpusEntry, Expected};
pub use generator::{
    random_double_collinear, random_generic_isostatic, random_singular_nullity1, GeneratorParams,
};
pub use path::{find_singular_config, linear_path, SingularPoint};
