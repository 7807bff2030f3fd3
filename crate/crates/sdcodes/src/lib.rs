//! Catalog files, parallel drivers, reports and the `sdcodes` command line
//! over [`sdcodes_core`].

pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod report;
pub mod search;
mod shipped;
pub mod tables;
pub mod verify;
pub mod weights;

pub use catalog::{Catalog, CatalogEntry, CatalogError, CatalogFile, Claims, ConstructionData};
pub use error::{Error, Result};

/// The shipped index file, as text.
pub fn shipped_index() -> &'static str {
    shipped::INDEX
}

/// A rayon pool with `threads` workers, or one per core when `None`.
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t);
    }
    Ok(b.build()?)
}
