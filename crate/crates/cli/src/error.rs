use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("{experiment} n={n} {param}{}: {source}", offset_label(.sample))]
    Sample {
        experiment: String,
        n: usize,
        param: String,
        sample: Option<u64>,
        #[source]
        source: znlab_core::Error,
    },
    #[error("row {0} not found in report")]
    RowNotFound(usize),
    #[error("no probe {param} for {experiment} n={n} under the report's configuration")]
    ProbeNotFound {
        experiment: String,
        n: usize,
        param: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config file: {0}")]
    Toml(#[from] toml::de::Error),
}

fn offset_label(sample: &Option<u64>) -> String {
    match sample {
        Some(i) => format!(" at sample offset {i}"),
        None => String::new(),
    }
}
