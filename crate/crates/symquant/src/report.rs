//! Report serialization: a tiny JSON emitter with fixed field order and
//! 17-significant-digit decimal floats, CSV mirrors, and atomic file output.
//!
//! Hand-rolled on purpose: identical invocations must produce byte-identical
//! report files, so nothing about formatting is left to a library default.

use std::io::Write;
use std::path::Path;

use crate::rootsys::WeightVec;
use crate::{Error, Rat, Result};

/// 17 significant decimal digits, round-trip exact for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn rat_str(r: Rat) -> String {
    if r.denom() == &1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Weight as a compact coordinate string, e.g. `2` or `1 0 1` or `1/2 0`.
pub fn weight_str(w: &WeightVec) -> String {
    w.fw.iter()
        .map(|&c| rat_str(c))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Minimal JSON document model with deterministic serialization.
#[derive(Debug, Clone)]
pub enum Json {
    Str(String),
    /// Preformatted numeric literal (floats via [`fmt_f64`], ints verbatim).
    Num(String),
    Bool(bool),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn float(x: f64) -> Json {
        Json::Num(fmt_f64(x))
    }

    pub fn int(x: i128) -> Json {
        Json::Num(x.to_string())
    }

    pub fn uint(x: u128) -> Json {
        Json::Num(x.to_string())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn floats(xs: &[f64]) -> Json {
        Json::Arr(xs.iter().map(|&x| Json::float(x)).collect())
    }

    pub fn weight(w: &WeightVec) -> Json {
        Json::Arr(w.fw.iter().map(|&c| Json::Str(rat_str(c))).collect())
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32));
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Num(n) => out.push_str(n),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Json::Str(k.clone()).write(out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_string_compact(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s.push('\n');
        s
    }
}

/// Provenance header shared by every report.
pub fn provenance(invocation: &str) -> Vec<(String, Json)> {
    vec![
        ("invocation".into(), Json::str(invocation)),
        ("version".into(), Json::str(env!("CARGO_PKG_VERSION"))),
    ]
}

/// CSV provenance comment lines.
pub fn csv_header(invocation: &str) -> String {
    format!(
        "# invocation: {invocation}\n# version: {}\n",
        env!("CARGO_PKG_VERSION")
    )
}

/// Frame-limit report as a JSON array of (t, distance) pairs.
pub fn frame_limit_json(report: &crate::convexg::FrameLimitReport) -> String {
    Json::Arr(
        report
            .entries
            .iter()
            .map(|&(t, d)| Json::Arr(vec![Json::float(t), Json::float(d)]))
            .collect(),
    )
    .to_string_compact()
}

/// Write atomically: temp file in the target directory, then rename.
pub fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = dir.to_path_buf();
    let base = path
        .file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "report".into());
    tmp.push(format!(".{base}.tmp"));
    {
        let mut f = std::fs::File::create(&tmp)
            .map_err(|e| Error::Usage(format!("cannot create {}: {e}", tmp.display())))?;
        f.write_all(content.as_bytes())
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", tmp.display())))?;
        f.sync_all().ok();
    }
    std::fs::rename(&tmp, path)
        .map_err(|e| Error::Usage(format!("cannot move report into place: {e}")))?;
    Ok(())
}
