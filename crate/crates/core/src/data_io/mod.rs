//! Reading and writing datasets.
//!
//! The canonical format is one JSON record per line. The first line of every
//! file is a header naming the schema version and the record kind:
//!
//! ```text
//! {"schema":"prefeval.v1","kind":"judgments"}
//! {"query_id":"q001","result_id":"q001-d01","rater_id":"u01","grade":2}
//! ```
//!
//! Judgments, sessions and clicks may instead be given as tab-separated
//! text (`.tsv`), with `#` starting a comment line:
//!
//! ```text
//! # query_id  result_id  rater_id  grade  [snippet_relevant]
//! # query_id  rater_id  variant  start_ts  end_ts  [satisfied]
//! # query_id  rater_id  variant  rank  ts
//! ```

mod oracle;
mod synth;

pub use oracle::{oracle_implicit_pir, oracle_pir, oracle_pir_row};
pub use synth::{generate_synthetic, ClickModel, PreferenceModel, SynthSpec};

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Click, EvaluationDataset, GradedJudgment, PreferenceJudgment, Query, RankedListPair, Session,
    ValidationOptions, ValidationReport, Variant,
};

pub const SCHEMA: &str = "prefeval.v1";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    schema: String,
    kind: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ListRow {
    query_id: String,
    variant: Variant,
    rank: usize,
    result_id: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SessionRow {
    query_id: String,
    rater_id: String,
    variant: Variant,
    start_ts: i64,
    end_ts: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    satisfied: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ClickRow {
    query_id: String,
    rater_id: String,
    variant: Variant,
    rank: u32,
    ts: i64,
}

/// Locations of the record files making up a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub queries: PathBuf,
    pub judgments: PathBuf,
    pub lists: PathBuf,
    pub preferences: PathBuf,
    pub sessions: Option<PathBuf>,
    pub clicks: Option<PathBuf>,
}

impl DatasetPaths {
    /// Standard file names inside `dir`. For judgments, sessions and clicks a
    /// `.jsonl` file wins over a `.tsv` one; sessions and clicks are optional.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        let pick = |stem: &str| {
            let jsonl = dir.join(format!("{stem}.jsonl"));
            let tsv = dir.join(format!("{stem}.tsv"));
            if !jsonl.exists() && tsv.exists() {
                tsv
            } else {
                jsonl
            }
        };
        let optional = |stem: &str| Some(pick(stem)).filter(|p| p.exists());
        DatasetPaths {
            queries: dir.join("queries.jsonl"),
            judgments: pick("judgments"),
            lists: dir.join("lists.jsonl"),
            preferences: dir.join("preferences.jsonl"),
            sessions: optional("sessions"),
            clicks: optional("clicks"),
        }
    }
}

fn is_tsv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsv"))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_owned(),
        line,
        message: message.into(),
    }
}

/// Non-blank lines with their 1-based numbers.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn read_jsonl<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<Vec<(usize, T)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = numbered_lines(&text);
    // A file with no lines at all is an empty record set.
    let Some((n, first)) = lines.next() else {
        return Ok(Vec::new());
    };
    let header: Header = serde_json::from_str(first)
        .map_err(|e| parse_err(path, n, format!("bad header: {e}")))?;
    if header.schema != SCHEMA {
        return Err(parse_err(path, n, format!("unsupported schema {:?}", header.schema)));
    }
    if header.kind != kind {
        return Err(parse_err(
            path,
            n,
            format!("expected {kind:?} records, header says {:?}", header.kind),
        ));
    }
    lines
        .map(|(n, l)| {
            serde_json::from_str(l)
                .map(|r| (n, r))
                .map_err(|e| parse_err(path, n, e.to_string()))
        })
        .collect()
}

fn read_tsv(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(numbered_lines(&text)
        .filter(|(_, l)| !l.starts_with('#'))
        .map(|(n, l)| (n, l.split('\t').map(|f| f.trim().to_owned()).collect()))
        .collect())
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, fields: &[String], i: usize, name: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = fields
        .get(i)
        .ok_or_else(|| parse_err(path, line, format!("missing column {name}")))?;
    raw.parse()
        .map_err(|e| parse_err(path, line, format!("bad {name} {raw:?}: {e}")))
}

fn optional_bool(path: &Path, line: usize, fields: &[String], i: usize, name: &str) -> Result<Option<bool>> {
    match fields.get(i).map(|f| f.to_ascii_lowercase()).as_deref() {
        None | Some("") => Ok(None),
        Some("1" | "true" | "yes") => Ok(Some(true)),
        Some("0" | "false" | "no") => Ok(Some(false)),
        Some(other) => Err(parse_err(path, line, format!("bad {name} {other:?}"))),
    }
}

fn check_columns(path: &Path, line: usize, fields: &[String], min: usize, max: usize) -> Result<()> {
    if fields.len() < min || fields.len() > max {
        return Err(parse_err(
            path,
            line,
            format!("expected {min}..={max} tab-separated columns, found {}", fields.len()),
        ));
    }
    Ok(())
}

fn variant_field(path: &Path, line: usize, fields: &[String], i: usize) -> Result<Variant> {
    match fields.get(i).map(String::as_str) {
        Some("A") => Ok(Variant::A),
        Some("B") => Ok(Variant::B),
        other => Err(parse_err(path, line, format!("bad variant {other:?}"))),
    }
}

fn read_judgments(path: &Path) -> Result<Vec<GradedJudgment>> {
    if !is_tsv(path) {
        return Ok(read_jsonl(path, "judgments")?.into_iter().map(|(_, j)| j).collect());
    }
    read_tsv(path)?
        .into_iter()
        .map(|(n, f)| {
            check_columns(path, n, &f, 4, 5)?;
            let grade: i64 = field(path, n, &f, 3, "grade")?;
            Ok(GradedJudgment {
                query_id: f[0].clone(),
                result_id: f[1].clone(),
                rater_id: f[2].clone(),
                grade: grade.try_into().map_err(|e: Error| parse_err(path, n, e.to_string()))?,
                snippet_relevant: optional_bool(path, n, &f, 4, "snippet_relevant")?,
            })
        })
        .collect()
}

/// Rank → (result, line) for variants A and B of one query.
type RankedRows = [BTreeMap<usize, (String, usize)>; 2];

fn read_lists(path: &Path) -> Result<Vec<RankedListPair>> {
    let rows: Vec<(usize, ListRow)> = read_jsonl(path, "lists")?;
    // query → variant → rank → (result, line); query order follows first appearance
    let mut order = Vec::new();
    let mut lists: HashMap<String, RankedRows> = HashMap::new();
    for (n, row) in rows {
        if row.rank == 0 {
            return Err(parse_err(path, n, "rank must be at least 1"));
        }
        let entry = lists.entry(row.query_id.clone()).or_insert_with(|| {
            order.push(row.query_id.clone());
            Default::default()
        });
        let slot = &mut entry[row.variant as usize];
        if slot.insert(row.rank, (row.result_id, n)).is_some() {
            return Err(parse_err(
                path,
                n,
                format!("duplicate rank {} in list {}/{}", row.rank, row.query_id, row.variant),
            ));
        }
    }
    order
        .into_iter()
        .map(|q| {
            let [a, b] = lists.remove(&q).expect("recorded query");
            let flatten = |m: BTreeMap<usize, (String, usize)>, v: Variant| -> Result<Vec<String>> {
                let mut out = Vec::with_capacity(m.len());
                for (expected, (rank, (id, line))) in (1..).zip(m) {
                    if rank != expected {
                        return Err(parse_err(
                            path,
                            line,
                            format!("list {q}/{v} skips rank {expected}"),
                        ));
                    }
                    out.push(id);
                }
                if out.is_empty() {
                    return Err(parse_err(path, 0, format!("list {q}/{v} is missing")));
                }
                Ok(out)
            };
            Ok(RankedListPair {
                variant_a: flatten(a, Variant::A)?,
                variant_b: flatten(b, Variant::B)?,
                query_id: q,
            })
        })
        .collect()
}

fn read_sessions(path: &Path) -> Result<Vec<(usize, Session)>> {
    let to_session = |r: SessionRow| Session {
        query_id: r.query_id,
        rater_id: r.rater_id,
        variant: r.variant,
        start_ts: r.start_ts,
        end_ts: r.end_ts,
        clicks: Vec::new(),
        satisfied: r.satisfied,
    };
    if !is_tsv(path) {
        return Ok(read_jsonl(path, "sessions")?
            .into_iter()
            .map(|(n, r)| (n, to_session(r)))
            .collect());
    }
    read_tsv(path)?
        .into_iter()
        .map(|(n, f)| {
            check_columns(path, n, &f, 5, 6)?;
            let row = SessionRow {
                query_id: f[0].clone(),
                rater_id: f[1].clone(),
                variant: variant_field(path, n, &f, 2)?,
                start_ts: field(path, n, &f, 3, "start_ts")?,
                end_ts: field(path, n, &f, 4, "end_ts")?,
                satisfied: optional_bool(path, n, &f, 5, "satisfied")?,
            };
            Ok((n, to_session(row)))
        })
        .collect()
}

fn read_clicks(path: &Path) -> Result<Vec<(usize, ClickRow)>> {
    if !is_tsv(path) {
        return read_jsonl(path, "clicks");
    }
    read_tsv(path)?
        .into_iter()
        .map(|(n, f)| {
            check_columns(path, n, &f, 5, 5)?;
            Ok((
                n,
                ClickRow {
                    query_id: f[0].clone(),
                    rater_id: f[1].clone(),
                    variant: variant_field(path, n, &f, 2)?,
                    rank: field(path, n, &f, 3, "rank")?,
                    ts: field(path, n, &f, 4, "ts")?,
                },
            ))
        })
        .collect()
}

/// Parses the record files without running dataset validation.
pub fn read_dataset(paths: &DatasetPaths) -> Result<EvaluationDataset> {
    let queries: Vec<Query> = read_jsonl(&paths.queries, "queries")?
        .into_iter()
        .map(|(_, q)| q)
        .collect();
    let judgments = read_judgments(&paths.judgments)?;
    let lists = read_lists(&paths.lists)?;
    let preferences: Vec<PreferenceJudgment> = read_jsonl(&paths.preferences, "preferences")?
        .into_iter()
        .map(|(_, p)| p)
        .collect();

    let mut sessions = match &paths.sessions {
        Some(p) => read_sessions(p)?,
        None => Vec::new(),
    };
    if let Some(path) = &paths.clicks {
        let key = |s: &Session| (s.query_id.clone(), s.rater_id.clone(), s.variant);
        let index: HashMap<_, usize> = sessions
            .iter()
            .enumerate()
            .rev()
            .map(|(i, (_, s))| (key(s), i))
            .collect();
        for (n, c) in read_clicks(path)? {
            let i = index
                .get(&(c.query_id.clone(), c.rater_id.clone(), c.variant))
                .ok_or_else(|| {
                    parse_err(
                        path,
                        n,
                        format!("click for unknown session {}/{}/{}", c.query_id, c.rater_id, c.variant),
                    )
                })?;
            sessions[*i].1.clicks.push(Click { rank: c.rank, ts: c.ts });
        }
    }
    let sessions = sessions.into_iter().map(|(_, s)| s).collect();
    Ok(EvaluationDataset::new(queries, judgments, lists, preferences, sessions))
}

/// Parses and validates a dataset. The returned dataset carries the
/// validation mode, which governs how scoring treats missing judgments.
pub fn load_dataset(paths: &DatasetPaths, opts: ValidationOptions) -> Result<(EvaluationDataset, ValidationReport)> {
    let ds = read_dataset(paths)?.with_mode(opts.mode);
    let report = ds.validate(opts)?;
    Ok((ds, report))
}

fn write_jsonl<T: Serialize>(path: &Path, kind: &str, records: impl IntoIterator<Item = T>) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(fs::File::create(path).map_err(io)?);
    let header = Header {
        schema: SCHEMA.into(),
        kind: kind.into(),
    };
    serde_json::to_writer(&mut w, &header).map_err(std::io::Error::from).map_err(io)?;
    w.write_all(b"\n").map_err(io)?;
    for r in records {
        serde_json::to_writer(&mut w, &r).map_err(std::io::Error::from).map_err(io)?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes the canonical files into `dir` (created if needed) and returns
/// their paths. Sessions and clicks are written only when present.
pub fn write_dataset(ds: &EvaluationDataset, dir: impl AsRef<Path>) -> Result<DatasetPaths> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let has_sessions = !ds.sessions().is_empty();
    let paths = DatasetPaths {
        queries: dir.join("queries.jsonl"),
        judgments: dir.join("judgments.jsonl"),
        lists: dir.join("lists.jsonl"),
        preferences: dir.join("preferences.jsonl"),
        sessions: has_sessions.then(|| dir.join("sessions.jsonl")),
        clicks: has_sessions.then(|| dir.join("clicks.jsonl")),
    };
    write_jsonl(&paths.queries, "queries", ds.queries())?;
    write_jsonl(&paths.judgments, "judgments", ds.judgments())?;
    let rows = ds.list_pairs().iter().flat_map(|l| {
        [Variant::A, Variant::B].into_iter().flat_map(move |v| {
            l.list(v).iter().enumerate().map(move |(i, id)| ListRow {
                query_id: l.query_id.clone(),
                variant: v,
                rank: i + 1,
                result_id: id.clone(),
            })
        })
    });
    write_jsonl(&paths.lists, "lists", rows)?;
    write_jsonl(&paths.preferences, "preferences", ds.preferences())?;
    if let (Some(sp), Some(cp)) = (&paths.sessions, &paths.clicks) {
        write_jsonl(
            sp,
            "sessions",
            ds.sessions().iter().map(|s| SessionRow {
                query_id: s.query_id.clone(),
                rater_id: s.rater_id.clone(),
                variant: s.variant,
                start_ts: s.start_ts,
                end_ts: s.end_ts,
                satisfied: s.satisfied,
            }),
        )?;
        write_jsonl(
            cp,
            "clicks",
            ds.sessions().iter().flat_map(|s| {
                s.clicks.iter().map(move |c| ClickRow {
                    query_id: s.query_id.clone(),
                    rater_id: s.rater_id.clone(),
                    variant: s.variant,
                    rank: c.rank,
                    ts: c.ts,
                })
            }),
        )?;
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ValidationMode, Verdict};

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn small(dir: &Path) -> DatasetPaths {
        write(
            dir,
            "queries.jsonl",
            "{\"schema\":\"prefeval.v1\",\"kind\":\"queries\"}\n\
             {\"id\":\"q1\",\"type\":\"factual\",\"language\":\"EN\",\"text\":\"boiling point\",\"info_need\":\"x\"}\n",
        );
        write(
            dir,
            "judgments.tsv",
            "# query result rater grade\nq1\tr1\tu1\t1\nq1\tr2\tu1\t6\t1\n",
        );
        write(
            dir,
            "lists.jsonl",
            "{\"schema\":\"prefeval.v1\",\"kind\":\"lists\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"A\",\"rank\":2,\"result_id\":\"r2\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"A\",\"rank\":1,\"result_id\":\"r1\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"B\",\"rank\":1,\"result_id\":\"r2\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"B\",\"rank\":2,\"result_id\":\"r1\"}\n",
        );
        write(
            dir,
            "preferences.jsonl",
            "{\"schema\":\"prefeval.v1\",\"kind\":\"preferences\"}\n\
             {\"query_id\":\"q1\",\"rater_id\":\"u1\",\"verdict\":\"A\"}\n",
        );
        write(dir, "sessions.tsv", "q1\tu1\tA\t100\t160\ttrue\n");
        write(dir, "clicks.tsv", "# clicks\nq1\tu1\tA\t1\t110\n\nq1\tu1\tA\t1\t120\n");
        DatasetPaths::in_dir(dir)
    }

    #[test]
    fn tsv_and_jsonl_mix_loads() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small(dir.path());
        assert!(paths.judgments.ends_with("judgments.tsv"));
        let (ds, report) = load_dataset(&paths, ValidationOptions::new(ValidationMode::Strict, 2)).unwrap();
        assert!(report.is_clean());
        assert_eq!(ds.list_pair("q1").unwrap().variant_a, ["r1", "r2"]);
        assert_eq!(ds.judgments()[1].snippet_relevant, Some(true));
        assert_eq!(ds.sessions()[0].clicks.len(), 2);
        assert_eq!(ds.preferences()[0].verdict, Verdict::A);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ds = read_dataset(&small(dir.path())).unwrap();
        let out = tempfile::tempdir().unwrap();
        let paths = write_dataset(&ds, out.path()).unwrap();
        let again = read_dataset(&paths).unwrap();
        assert_eq!(ds, again);
        let text = fs::read_to_string(&paths.judgments).unwrap();
        assert!(text.starts_with("{\"schema\":\"prefeval.v1\",\"kind\":\"judgments\"}\n"));
    }

    #[test]
    fn grade_seven_is_rejected_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small(dir.path());
        write(dir.path(), "judgments.tsv", "q1\tr1\tu1\t1\nq1\tr2\tu1\t7\n");
        let err = read_dataset(&paths).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("judgments.tsv:2:"));

        let p = write(
            dir.path(),
            "j.jsonl",
            "{\"schema\":\"prefeval.v1\",\"kind\":\"judgments\"}\n\
             {\"query_id\":\"q1\",\"result_id\":\"r1\",\"rater_id\":\"u1\",\"grade\":7}\n",
        );
        let err = read_dataset(&DatasetPaths { judgments: p, ..paths }).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn structural_errors() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small(dir.path());
        write(dir.path(), "clicks.tsv", "q1\tu9\tA\t1\t110\n");
        assert!(matches!(read_dataset(&paths), Err(Error::Parse { line: 1, .. })));

        let p = write(
            dir.path(),
            "gap.jsonl",
            "{\"schema\":\"prefeval.v1\",\"kind\":\"lists\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"A\",\"rank\":1,\"result_id\":\"r1\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"A\",\"rank\":3,\"result_id\":\"r2\"}\n\
             {\"query_id\":\"q1\",\"variant\":\"B\",\"rank\":1,\"result_id\":\"r2\"}\n",
        );
        assert!(matches!(read_lists(&p), Err(Error::Parse { line: 3, .. })));

        let p = write(dir.path(), "wrongkind.jsonl", "{\"schema\":\"prefeval.v1\",\"kind\":\"queries\"}\n");
        assert!(matches!(read_lists(&p), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_preferences_load() {
        let dir = tempfile::tempdir().unwrap();
        let paths = small(dir.path());
        write(dir.path(), "preferences.jsonl", "");
        assert!(read_dataset(&paths).unwrap().preferences().is_empty());
        write(dir.path(), "preferences.jsonl", "{\"schema\":\"prefeval.v1\",\"kind\":\"preferences\"}\n");
        assert!(read_dataset(&paths).unwrap().preferences().is_empty());
    }
}
