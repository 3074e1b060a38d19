//! Corpus manifest: the delimiter-separated table that drives batch runs.
//!
//! Columns: `id`, `genre`, `quality`, `duration` (`H:MM:SS`), `transcript`.
//! Row order is preserved; it defines the processing and output order.

use std::collections::HashSet;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::error::ManifestError;
use crate::parser::{Genre, InquiryMeta, Quality};

/// One manifest row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub genre: Genre,
    pub quality: Quality,
    pub duration_secs: u64,
    pub transcript_path: PathBuf,
}

impl ManifestEntry {
    pub fn meta(&self) -> InquiryMeta {
        InquiryMeta {
            genre: self.genre,
            quality: self.quality,
            duration_secs: self.duration_secs,
        }
    }
}

/// The whole corpus manifest, rows in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Reads a manifest file. Relative transcript paths are resolved against
    /// the manifest's directory.
    pub fn load(path: &Path) -> Result<Manifest, ManifestError> {
        let file = std::fs::File::open(path)?;
        let mut manifest = Manifest::from_reader(file)?;
        if let Some(dir) = path.parent() {
            for entry in &mut manifest.entries {
                if entry.transcript_path.is_relative() {
                    entry.transcript_path = dir.join(&entry.transcript_path);
                }
            }
        }
        Ok(manifest)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Manifest, ManifestError> {
        let mut csv = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);

        let headers = csv.headers()?.clone();
        let col = |name: &str| -> Result<usize, ManifestError> {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| ManifestError::Malformed {
                    row: 0,
                    detail: format!("missing column {name:?}"),
                })
        };
        let (id_col, genre_col, quality_col, duration_col, path_col) = (
            col("id")?,
            col("genre")?,
            col("quality")?,
            col("duration")?,
            col("transcript")?,
        );

        let mut entries = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        for (i, record) in csv.records().enumerate() {
            let row = i + 1;
            let record = record?;
            let field = |col: usize, name: &str| -> Result<&str, ManifestError> {
                match record.get(col) {
                    Some(v) if !v.is_empty() => Ok(v),
                    _ => Err(ManifestError::Malformed {
                        row,
                        detail: format!("missing {name}"),
                    }),
                }
            };
            let malformed = |detail: String| ManifestError::Malformed { row, detail };

            let id = field(id_col, "id")?.to_string();
            if !seen.insert(id.clone()) {
                return Err(malformed(format!("duplicate inquiry id {id:?}")));
            }
            let genre = field(genre_col, "genre")?.parse().map_err(&malformed)?;
            let quality = field(quality_col, "quality")?.parse().map_err(&malformed)?;
            let duration_secs =
                parse_duration_hms(field(duration_col, "duration")?).map_err(&malformed)?;
            let transcript_path = PathBuf::from(field(path_col, "transcript")?);

            entries.push(ManifestEntry {
                id,
                genre,
                quality,
                duration_secs,
                transcript_path,
            });
        }
        Ok(Manifest { entries })
    }

    pub fn get(&self, id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Parses `H:MM:SS` (hour field of any width) into seconds.
pub fn parse_duration_hms(s: &str) -> Result<u64, String> {
    let bad = || format!("duration {s:?} is not H:MM:SS");
    let parts: Vec<&str> = s.split(':').collect();
    let [h, m, sec] = parts.as_slice() else {
        return Err(bad());
    };
    let h: u64 = h.parse().map_err(|_| bad())?;
    let m: u64 = m.parse().map_err(|_| bad())?;
    let sec: u64 = sec.parse().map_err(|_| bad())?;
    if m >= 60 || sec >= 60 {
        return Err(bad());
    }
    Ok(h * 3600 + m * 60 + sec)
}
