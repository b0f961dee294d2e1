use std::io::Write;
use std::path::Path;

use fastlight_core::{Error, Result};

/// Writes `bytes` to standard output, or to `path` via a sibling temporary
/// file that is renamed into place only after a complete write.
pub fn write_output(path: &str, bytes: &[u8]) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    }
    let target = Path::new(path);
    let dir = match target.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(target)
        .map_err(|e| Error::Io(format!("{}: {}", target.display(), e.error)))?;
    Ok(())
}
