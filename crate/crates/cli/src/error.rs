use std::fmt;
use std::path::PathBuf;

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// Flag combinations clap cannot express.
    Usage(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Malformed input file; `line` is 1-based and counts the header.
    Parse {
        path: PathBuf,
        line: Option<u64>,
        message: String,
    },
    Core(quadstat_core::Error),
}

impl CliError {
    pub(crate) fn parse(path: &std::path::Path, line: Option<u64>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Core(e) => e.code(),
        }
    }

    /// Process exit status. 2 matches clap's own usage errors.
    pub fn exit_code(&self) -> u8 {
        use quadstat_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Parse { .. } => 4,
            CliError::Core(e) => match e {
                E::Domain { .. } => 10,
                E::Validation(_) => 11,
                E::DegenerateForm { .. } => 12,
                E::Degenerate(_) => 13,
                E::NotApplicable { .. } => 14,
                E::Numerical { .. } => 15,
                E::Unreachable { .. } => 16,
            },
        }
    }

    /// Single-line JSON written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = json!({
            "code": self.code(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        let extra = match self {
            CliError::Parse { path, line, .. } => json!({ "path": path.display().to_string(), "line": line }),
            CliError::Io { path, .. } => json!({ "path": path.display().to_string() }),
            CliError::Core(quadstat_core::Error::NotApplicable { fallback: Some(m), .. }) => {
                json!({ "fallback": m.name() })
            }
            CliError::Core(quadstat_core::Error::Unreachable { max_n, achieved_power }) => {
                json!({ "max_n": max_n, "achieved_power": achieved_power })
            }
            CliError::Core(quadstat_core::Error::DegenerateForm { constant }) => json!({ "constant": constant }),
            _ => json!({}),
        };
        if let (Some(b), serde_json::Value::Object(e)) = (body.as_object_mut(), extra) {
            b.extend(e);
        }
        json!({ "error": body })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse {
                path,
                line: Some(line),
                message,
            } => write!(f, "{}:{line}: {message}", path.display()),
            CliError::Parse {
                path,
                line: None,
                message,
            } => write!(f, "{}: {message}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<quadstat_core::Error> for CliError {
    fn from(e: quadstat_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
