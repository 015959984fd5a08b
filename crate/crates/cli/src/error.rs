use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

use crate::svg::SvgError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] btc_core::Error),
    #[error(transparent)]
    Svg(#[from] SvgError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Core(_) => "module",
            CliError::Svg(_) => "plot",
        }
    }

    /// 2 for bad invocations and configs, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
            },
            "exit_code": self.exit_code(),
        })
    }
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_error!(
    btc_core::meanfield::MeanFieldError,
    btc_core::dicke::DickeError,
    btc_core::analysis::AnalysisError
);

impl From<btc_core::ParamError> for CliError {
    fn from(e: btc_core::ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}
