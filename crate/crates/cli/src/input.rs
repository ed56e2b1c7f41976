use std::path::Path;

use prodiff::json;
use prodiff::{Error, Result};
use serde_json::Value;

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn load(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Parse {
            key: arg.to_string(),
            message: format!("cannot read input file: {e}"),
        })?
    };
    json::parse_text(&text)
}
