use std::io;
use std::path::{Path, PathBuf};

use tempfile::TempDir;

/// Freshly created, uniquely named directory owned by one evaluation.
///
/// Dropping it deletes the directory; [`keep`](Self::keep) detaches it so it
/// survives for inspection.
#[derive(Debug)]
pub struct WorkDir {
    dir: TempDir,
}

impl WorkDir {
    /// Creates `<root>/<case>-XXXXXX`, creating `root` first if needed.
    pub fn create(root: &Path, case: &str) -> io::Result<Self> {
        std::fs::create_dir_all(root)?;
        let dir = tempfile::Builder::new()
            .prefix(&format!("{case}-"))
            .tempdir_in(root)?;
        Ok(WorkDir { dir })
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn keep(self) -> PathBuf {
        self.dir.keep()
    }

    pub fn remove(self) -> io::Result<()> {
        self.dir.close()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_empty_and_removable() {
        let root = tempfile::tempdir().unwrap();
        let a = WorkDir::create(&root.path().join("nested"), "StarBox").unwrap();
        let b = WorkDir::create(&root.path().join("nested"), "StarBox").unwrap();
        assert_ne!(a.path(), b.path());
        assert_eq!(std::fs::read_dir(a.path()).unwrap().count(), 0);
        let kept = a.keep();
        assert!(kept.is_dir());
        let b_path = b.path().to_path_buf();
        b.remove().unwrap();
        assert!(!b_path.exists());
    }
}
