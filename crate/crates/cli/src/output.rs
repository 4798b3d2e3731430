use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let wrap = |source: io::Error| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(wrap)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(contents.as_bytes()).map_err(wrap)?;
    tmp.as_file().sync_all().map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

/// Where a command's output goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

/// `--out` wins; machine-readable output falls back to `default_name`
/// inside the default output directory; everything else goes to stdout.
pub fn destination(
    out: Option<&Path>,
    out_dir: Option<&Path>,
    machine_readable: bool,
    default_name: &str,
) -> Destination {
    match (out, out_dir) {
        (Some(p), _) => Destination::File(p.to_path_buf()),
        (None, Some(dir)) if machine_readable => Destination::File(dir.join(default_name)),
        _ => Destination::Stdout,
    }
}

pub fn emit(dest: &Destination, contents: &str) -> Result<()> {
    match dest {
        Destination::Stdout => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
        Destination::File(path) => {
            write_atomic(path, contents)?;
            log::info!("wrote {}", path.display());
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.csv");
        write_atomic(&p, "one\n").unwrap();
        write_atomic(&p, "two\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two\n");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn destination_rules() {
        let dir = Path::new("/tmp/out");
        assert_eq!(
            destination(Some(Path::new("x.csv")), Some(dir), true, "d.csv"),
            Destination::File("x.csv".into())
        );
        assert_eq!(
            destination(None, Some(dir), true, "d.csv"),
            Destination::File(dir.join("d.csv"))
        );
        assert_eq!(
            destination(None, Some(dir), false, "d.csv"),
            Destination::Stdout
        );
        assert_eq!(destination(None, None, true, "d.csv"), Destination::Stdout);
    }
}
