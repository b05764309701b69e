//! Prompting a completion endpoint (or a replay file) and scoring the answers.

pub mod client;
pub mod prompt;
pub mod response;
pub mod run;

pub use client::{
    request_digest, ClientError, HttpClient, HttpConfig, ModelClient, RecordingClient, ReplayClient, ReplayRecord,
};
pub use prompt::{build_prompt, FewShotExample, InputFormat, Prompt, PromptConfig, PromptError, Shots};
pub use response::{parse_response, ResponseError};
pub use run::{make_replay, run_benchmark, BenchError, BenchRun, BenchSummary, RunOptions};
