//! Line-oriented text formats.
//!
//! Instance files:
//!
//! ```text
//! polyg-instance 1
//! name uniform-500-7
//! n 3
//! 0 10 20
//! 1 30 5
//! 2 -4 8
//! ```
//!
//! Each point line is `id x y` with ids counting up from 0. Plain point lists
//! without the header are accepted too: one point per line as `x y` or
//! `id x y`, separated by whitespace or commas, `#` starting a comment.
//!
//! Solution files:
//!
//! ```text
//! polyg-solution 1
//! instance uniform-500-7
//! objective max
//! score 0.8734
//! n 3
//! 0
//! 2
//! 1
//! ```
//!
//! The vertex ids are listed in cycle order, one per line. The score is
//! written with the shortest representation that parses back to the same
//! `f64`.

use std::fmt::Write as _;
use std::path::Path;

use polyg_core::{Instance, Objective, Point};

pub const INSTANCE_HEADER: &str = "polyg-instance";
pub const SOLUTION_HEADER: &str = "polyg-solution";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported {kind} format version {version}")]
    Version { kind: &'static str, version: String },
    #[error("expected {expected} records, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Instance(#[from] polyg_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn keyed<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str), FormatError> {
    let (no, l) = line.ok_or_else(|| syntax(0, format!("missing `{key}` line")))?;
    let rest = l
        .strip_prefix(key)
        .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
        .ok_or_else(|| syntax(no, format!("expected `{key}`")))?;
    Ok((no, rest.trim()))
}

fn number<T: std::str::FromStr>(no: usize, s: &str, what: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| syntax(no, format!("invalid {what} `{s}`")))
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{INSTANCE_HEADER} {VERSION}").unwrap();
    writeln!(out, "name {}", instance.name).unwrap();
    writeln!(out, "n {}", instance.len()).unwrap();
    for p in instance.points() {
        writeln!(out, "{} {} {}", p.id, p.x, p.y).unwrap();
    }
    out
}

/// Parses a versioned instance file or a plain point list. `fallback_name`
/// names plain lists.
pub fn parse_instance(text: &str, fallback_name: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text).peekable();
    let versioned = lines.peek().is_some_and(|(_, l)| l.split_whitespace().next() == Some(INSTANCE_HEADER));
    if !versioned {
        return parse_point_list(lines, fallback_name);
    }
    let (_, version) = keyed(lines.next(), INSTANCE_HEADER)?;
    if version != VERSION.to_string() {
        return Err(FormatError::Version { kind: "instance", version: version.to_string() });
    }
    // The name line keeps everything after the key, so names may hold spaces
    // but are trimmed.
    let (_, name) = keyed(lines.next(), "name")?;
    let (no, n) = keyed(lines.next(), "n")?;
    let n: usize = number(no, n, "point count")?;
    let mut points = Vec::with_capacity(n);
    for (no, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 3 {
            return Err(syntax(no, "expected `id x y`"));
        }
        let id: u32 = number(no, f[0], "id")?;
        if id as usize != points.len() {
            return Err(syntax(no, format!("id {id} out of sequence")));
        }
        points.push(Point::new(id, number(no, f[1], "coordinate")?, number(no, f[2], "coordinate")?));
    }
    if points.len() != n {
        return Err(FormatError::Count { expected: n, found: points.len() });
    }
    Ok(Instance::from_points(name, points)?)
}

fn parse_point_list<'a>(lines: impl Iterator<Item = (usize, &'a str)>, name: &str) -> Result<Instance, FormatError> {
    let mut points = Vec::new();
    for (no, l) in lines {
        let f: Vec<&str> = l.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let (x, y) = match f.len() {
            2 => (f[0], f[1]),
            3 => {
                let id: usize = number(no, f[0], "id")?;
                if id != points.len() {
                    return Err(syntax(no, format!("id {id} out of sequence")));
                }
                (f[1], f[2])
            }
            _ => return Err(syntax(no, "expected `x y` or `id x y`")),
        };
        let id = points.len() as u32;
        points.push(Point::new(id, number(no, x, "coordinate")?, number(no, y, "coordinate")?));
    }
    Ok(Instance::from_points(name, points)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFile {
    pub instance: String,
    pub objective: Objective,
    pub score: f64,
    pub cycle: Vec<u32>,
}

pub fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Max => "max",
        Objective::Min => "min",
    }
}

pub fn parse_objective(s: &str) -> Option<Objective> {
    match s {
        "max" => Some(Objective::Max),
        "min" => Some(Objective::Min),
        _ => None,
    }
}

pub fn write_solution(sol: &SolutionFile) -> String {
    let mut out = String::new();
    writeln!(out, "{SOLUTION_HEADER} {VERSION}").unwrap();
    writeln!(out, "instance {}", sol.instance).unwrap();
    writeln!(out, "objective {}", objective_name(sol.objective)).unwrap();
    writeln!(out, "score {}", sol.score).unwrap();
    writeln!(out, "n {}", sol.cycle.len()).unwrap();
    for v in &sol.cycle {
        writeln!(out, "{v}").unwrap();
    }
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, FormatError> {
    let mut lines = content_lines(text);
    let (_, version) = keyed(lines.next(), SOLUTION_HEADER)?;
    if version != VERSION.to_string() {
        return Err(FormatError::Version { kind: "solution", version: version.to_string() });
    }
    let (_, instance) = keyed(lines.next(), "instance")?;
    let (no, objective) = keyed(lines.next(), "objective")?;
    let objective = parse_objective(objective).ok_or_else(|| syntax(no, "objective must be `max` or `min`"))?;
    let (no, score) = keyed(lines.next(), "score")?;
    let score: f64 = number(no, score, "score")?;
    let (no, n) = keyed(lines.next(), "n")?;
    let n: usize = number(no, n, "vertex count")?;
    let mut cycle = Vec::with_capacity(n);
    for (no, l) in lines {
        cycle.push(number(no, l, "vertex id")?);
    }
    if cycle.len() != n {
        return Err(FormatError::Count { expected: n, found: cycle.len() });
    }
    Ok(SolutionFile { instance: instance.to_string(), objective, score, cycle })
}

pub fn read_instance(path: &Path) -> Result<Instance, FormatError> {
    let text = std::fs::read_to_string(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    parse_instance(&text, stem)
}

pub fn read_solution(path: &Path) -> Result<SolutionFile, FormatError> {
    parse_solution(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_lists() {
        let text = "# a comment\n0 0\n10, 0\n\n5 7 # trailing\n";
        let inst = parse_instance(text, "plain").unwrap();
        assert_eq!(inst.name, "plain");
        assert_eq!(inst.len(), 3);
        assert_eq!(inst.points()[2], Point::new(2, 5, 7));
        let with_ids = parse_instance("0 0 0\n1 4 0\n2 0 4\n", "x").unwrap();
        assert_eq!(with_ids.points()[1], Point::new(1, 4, 0));
        assert!(parse_instance("0 0 0\n2 4 0\n1 0 4\n", "x").is_err());
    }

    #[test]
    fn versioned_instance() {
        let text = "polyg-instance 1\nname two words\nn 3\n0 1 2\n1 3 4\n2 5 -7\n";
        let inst = parse_instance(text, "unused").unwrap();
        assert_eq!(inst.name, "two words");
        assert_eq!(write_instance(&inst), text);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_instance("polyg-instance 2\nname a\nn 0\n", "x"), Err(FormatError::Version { .. })));
        assert!(matches!(
            parse_instance("polyg-instance 1\nname a\nn 4\n0 0 0\n1 1 0\n2 0 1\n", "x"),
            Err(FormatError::Count { expected: 4, found: 3 })
        ));
        assert!(matches!(parse_instance("0 0\n1 1\n0 0\n", "x"), Err(FormatError::Instance(_))));
        assert!(parse_solution("polyg-solution 1\ninstance a\nobjective big\nscore 1\nn 0\n").is_err());
    }

    #[test]
    fn score_is_shortest_round_trip() {
        let sol =
            SolutionFile { instance: "a".into(), objective: Objective::Min, score: 0.1 + 0.2, cycle: vec![0, 2, 1] };
        let text = write_solution(&sol);
        assert!(text.contains("score 0.30000000000000004\n"));
        assert_eq!(parse_solution(&text).unwrap(), sol);
    }
}
