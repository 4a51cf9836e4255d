//! Batch front-end: a run configuration, the subcommands, and a JSON-lines
//! (or TSV) report stream ending in a summary record.
//!
//! Argument parsing lives in the binary; everything here works on a plain
//! [`RunConfig`] so runs can be driven from tests.

mod commands;
mod replay;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::kernel::HullBounds;
use crate::model::Tree;

pub use replay::Suite;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_160_422;

/// Environment variable capping the worker thread count.
pub const THREADS_VAR: &str = "PHYLOTOPE_THREADS";

macro_rules! text_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str().eq_ignore_ascii_case(s))
                    .ok_or_else(|| {
                        let names: Vec<&str> = Self::ALL.iter().map(|v| v.as_str()).collect();
                        Error::Parse(format!("unknown value `{s}`, expected one of {}", names.join(", ")))
                    })
            }
        }
    };
}
pub(crate) use text_enum;

text_enum!(
    /// Output encoding of the report stream.
    Format { Json => "json", Tsv => "tsv" }
);

text_enum!(FacetMode {
    ClosedForm => "closed-form",
    Brute => "brute",
    CrossCheck => "cross-check",
});

text_enum!(DecomposeMode {
    Brute => "brute",
    Constructive => "constructive",
    Compare => "compare",
});

text_enum!(FiberMode {
    Build => "build",
    VerifyFibgor => "verify-fibgor",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Vertices,
    Lattice,
    Facets(FacetMode),
    Normality,
    Decompose(DecomposeMode),
    Witness,
    Gorenstein,
    Fiber(FiberMode),
    /// Neighbours of the vertex with the given index.
    Adjacency {
        vertex: usize,
    },
    Replay(Suite),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Vertices => "vertices".into(),
            Command::Lattice => "lattice".into(),
            Command::Facets(m) => format!("facets {m}"),
            Command::Normality => "normality".into(),
            Command::Decompose(m) => format!("decompose {m}"),
            Command::Witness => "witness".into(),
            Command::Gorenstein => "gorenstein".into(),
            Command::Fiber(m) => format!("fiber {m}"),
            Command::Adjacency { .. } => "adjacency".into(),
            Command::Replay(s) => format!("replay {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub group: Option<GroupSpec>,
    pub m: Option<usize>,
    pub tree: Option<Tree>,
    pub k: Option<i64>,
    pub k_max: Option<i64>,
    pub bounds: HullBounds,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            group: None,
            m: None,
            tree: None,
            k: None,
            k_max: None,
            bounds: HullBounds::default(),
            format: Format::Json,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_group(mut self, group: &str) -> Result<Self> {
        self.group = Some(group.parse()?);
        Ok(self)
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_k(mut self, k: i64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_k_max(mut self, k_max: i64) -> Self {
        self.k_max = Some(k_max);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.bounds.max_vertices == 0 || self.bounds.max_dim == 0 {
            return Err(Error::Precondition("bounds must be positive".into()));
        }
        if self.m == Some(0) {
            return Err(Error::Precondition("--m must be positive".into()));
        }
        if self.m.is_some() && self.tree.is_some() {
            return Err(Error::Precondition(
                "give either --m or --tree, not both".into(),
            ));
        }
        for (flag, v) in [("--k", self.k), ("--kmax", self.k_max)] {
            if matches!(v, Some(v) if v < 1) {
                return Err(Error::Precondition(format!("{flag} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A mathematical check failed; the report holds the counterexample.
    Fail,
}

/// Process exit status: 0 pass, 1 failed check, 2 usage or bounds error.
pub fn exit_code(result: &Result<Status>) -> i32 {
    match result {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) | Err(Error::Z3StepRejected { .. }) => 1,
        Err(_) => 2,
    }
}

/// Caps the global worker pool at `$PHYLOTOPE_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Parse(format!(
            "{THREADS_VAR} must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Precondition(e.to_string()))
}

/// Runs one subcommand, streaming records to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    config.validate()?;
    let mut session = Session::new(out, config.format);
    match config.command {
        Command::Vertices => commands::vertices(config, &mut session)?,
        Command::Lattice => commands::lattice(config, &mut session)?,
        Command::Facets(mode) => commands::facets(config, mode, &mut session)?,
        Command::Normality => commands::normality(config, &mut session)?,
        Command::Decompose(mode) => commands::decompose(config, mode, &mut session)?,
        Command::Witness => commands::witness(config, &mut session)?,
        Command::Gorenstein => commands::gorenstein(config, &mut session)?,
        Command::Fiber(mode) => commands::fiber(config, mode, &mut session)?,
        Command::Adjacency { vertex } => commands::adjacency(config, vertex, &mut session)?,
        Command::Replay(suite) => replay::run_suite(suite, config, &mut session)?,
    }
    session.finish(&config.command.name(), config.seed)
}

/// Record writer plus the running tally of checks.
pub(crate) struct Session<'a> {
    out: &'a mut dyn Write,
    format: Format,
    header: Option<Vec<String>>,
    records: usize,
    checks: usize,
    failures: Vec<String>,
    summary: Map<String, Value>,
}

impl<'a> Session<'a> {
    fn new(out: &'a mut dyn Write, format: Format) -> Self {
        Self {
            out,
            format,
            header: None,
            records: 0,
            checks: 0,
            failures: Vec::new(),
            summary: Map::new(),
        }
    }

    /// Writes one record tagged with `kind`.
    pub(crate) fn emit<T: Serialize>(&mut self, kind: &str, value: &T) -> Result<()> {
        let mut map = match to_value(value)? {
            Value::Object(map) => map,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        map.insert("record".into(), Value::String(kind.into()));
        self.write(map)
    }

    fn write(&mut self, map: Map<String, Value>) -> Result<()> {
        self.records += 1;
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(map))?,
            Format::Tsv => {
                let keys: Vec<String> = map.keys().cloned().collect();
                if self.header.as_ref() != Some(&keys) {
                    writeln!(self.out, "#{}", keys.join("\t"))?;
                    self.header = Some(keys);
                }
                let cells: Vec<String> = map
                    .values()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                writeln!(self.out, "{}", cells.join("\t"))?;
            }
        }
        Ok(())
    }

    /// Counts a check; a failing check records `what` as a counterexample.
    pub(crate) fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
        ok
    }

    /// Adds a field to the summary record.
    pub(crate) fn note<T: Serialize>(&mut self, key: &str, value: T) -> Result<()> {
        self.summary.insert(key.into(), to_value(&value)?);
        Ok(())
    }

    fn finish(mut self, command: &str, seed: u64) -> Result<Status> {
        let status = if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        let mut map = std::mem::take(&mut self.summary);
        map.insert("record".into(), "summary".into());
        map.insert("command".into(), command.into());
        map.insert("seed".into(), seed.into());
        map.insert("records".into(), self.records.into());
        map.insert("checks".into(), self.checks.into());
        map.insert("failures".into(), to_value(&self.failures)?);
        let verdict = if status == Status::Pass {
            "pass"
        } else {
            "fail"
        };
        map.insert("verdict".into(), verdict.into());
        self.write(map)?;
        self.out.flush()?;
        Ok(status)
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(config: &RunConfig) -> (Result<Status>, String) {
        let mut buf = Vec::new();
        let status = run(config, &mut buf);
        (status, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn modes_parse() {
        assert_eq!(
            "closed-form".parse::<FacetMode>().unwrap(),
            FacetMode::ClosedForm
        );
        assert_eq!(
            "VERIFY-FIBGOR".parse::<FiberMode>().unwrap(),
            FiberMode::VerifyFibgor
        );
        assert!("fast".parse::<DecomposeMode>().is_err());
        assert_eq!("facetsZ3".parse::<Suite>().unwrap(), Suite::FacetsZ3);
    }

    #[test]
    fn vertices_stream_ends_with_summary() {
        let cfg = RunConfig::new(Command::Vertices)
            .with_group("Z2")
            .unwrap()
            .with_m(3);
        let (status, text) = run_to_string(&cfg);
        assert_eq!(status.unwrap(), Status::Pass);
        let lines: Vec<Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 5);
        let last = lines.last().unwrap();
        assert_eq!(last["record"], "summary");
        assert_eq!(last["seed"], DEFAULT_SEED);
        assert_eq!(last["verdict"], "pass");
    }

    #[test]
    fn identical_configs_give_identical_bytes() {
        let mut cfg = RunConfig::new(Command::Decompose(DecomposeMode::Compare))
            .with_group("Z3")
            .unwrap()
            .with_m(3)
            .with_k(2);
        cfg.seed = 7;
        assert_eq!(run_to_string(&cfg).1, run_to_string(&cfg).1);
    }

    #[test]
    fn tsv_has_headers() {
        let mut cfg = RunConfig::new(Command::Vertices)
            .with_group("Z2")
            .unwrap()
            .with_m(3);
        cfg.format = Format::Tsv;
        let (_, text) = run_to_string(&cfg);
        assert!(text.lines().next().unwrap().starts_with('#'));
        assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), 2);
    }

    #[test]
    fn usage_errors_exit_two() {
        let cfg = RunConfig::new(Command::Vertices);
        let mut buf = Vec::new();
        assert_eq!(exit_code(&run(&cfg, &mut buf)), 2);
        let mut cfg = RunConfig::new(Command::Vertices)
            .with_group("Z2")
            .unwrap()
            .with_m(3);
        cfg.bounds.max_dim = 0;
        assert_eq!(exit_code(&run(&cfg, &mut buf)), 2);
    }
}
