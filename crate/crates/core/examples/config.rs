//! Loading a JSON configuration: defaults are filled and every problem is
//! reported at once.

use agl::model::{validate_config, RawConfig};

fn main() -> agl::Result<()> {
    let good = RawConfig::from_json(r#"{"kind": "urn-capture", "n": 50, "p": 0.5}"#)?;
    println!("{}", validate_config(&good)?.to_json()?);

    let bad = RawConfig::from_json(r#"{"n": 1, "p": 1.5, "lambda": 0, "reps": 0}"#)?;
    if let Err(e) = validate_config(&bad) {
        println!("{e}");
    }
    Ok(())
}
