use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use poincare_core::kinematics::io::{write_state, Precision};
use poincare_core::kinematics::{MomentumGrid, StateVector};
use serde::Serialize;

/// The only place commands write to. File names are plain names, never
/// paths, so nothing lands outside `dir`.
pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Output> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output dir {}", dir.display()))?;
        let meta = fs::metadata(dir)?;
        if meta.permissions().readonly() {
            bail!("output dir {} is not writable", dir.display());
        }
        Ok(Output { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, name: &str) -> Result<PathBuf> {
        let plain = !name.is_empty()
            && name != "."
            && name != ".."
            && !name.contains(['/', '\\'])
            && Path::new(name).components().count() == 1;
        if !plain {
            bail!("refusing to write `{name}`: not a plain file name");
        }
        Ok(self.dir.join(name))
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let path = self.path(name)?;
        fs::write(&path, serde_json::to_string_pretty(value)?)?;
        Ok(path)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.path(name)?;
        fs::write(&path, text)?;
        Ok(path)
    }

    pub fn write_state(&self, stem: &str, state: &StateVector) -> Result<PathBuf> {
        self.path(&format!("{stem}.json"))?;
        Ok(write_state(&self.dir, stem, state, Precision::Complex128)?)
    }
}

/// `x1,x2,x3,value` for the lattice plane `x3 = x3[k3]`.
pub fn slice_csv(grid: &MomentumGrid, values: &[f64], k3: usize) -> String {
    let n = grid.n();
    let mut out = String::from("x1,x2,x3,value\n");
    for k2 in 0..n {
        for k1 in 0..n {
            let idx = grid.index([k1, k2, k3]);
            let x = grid.position(idx);
            out.push_str(&format!("{},{},{},{:e}\n", x[0], x[1], x[2], values[idx]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_names_that_leave_the_directory() {
        let dir = tempfile::tempdir().unwrap();
        let out = Output::create(dir.path()).unwrap();
        for bad in ["../x.json", "a/b.json", "..", "", "/etc/x"] {
            assert!(out.write_text(bad, "x").is_err(), "{bad}");
        }
        assert!(out.write_text("ok.csv", "x").is_ok());
    }

    #[test]
    fn slice_has_header_and_one_row_per_point() {
        let g = poincare_core::kinematics::build_grid(8, 4.0, 1.0).unwrap();
        let csv = slice_csv(&g, &vec![0.5; g.len()], 4);
        assert_eq!(csv.lines().count(), 1 + 64);
        assert!(csv.starts_with("x1,x2,x3,value\n"));
    }
}
