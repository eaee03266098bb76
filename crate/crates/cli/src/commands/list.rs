//! `list-testbed`: registered closed-form functions and their known properties.

use gevrey::testbed;

use crate::context::Ctx;
use crate::error::{CliError, CliResult, Outcome};

pub fn run(ctx: &Ctx, write_file: bool) -> CliResult<Outcome> {
    let summaries: Vec<_> = testbed::list().iter().map(|e| e.summary()).collect();
    let mut text = serde_json::to_string_pretty(&summaries).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    print!("{text}");
    if write_file {
        ctx.write("testbed.json", &text)?;
    }
    Ok(Outcome::Passed)
}
