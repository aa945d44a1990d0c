//! JSON file helpers shared by the command-line tools.

use crate::error::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::Path;

/// Parses `text`, reporting the JSON path of the first offending field.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse { path: e.path().to_string(), message: e.inner().to_string() })
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    from_json_str(&std::fs::read_to_string(path)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelSpec;

    #[test]
    fn parse_errors_name_the_field() {
        let err = from_json_str::<ChannelSpec>(r#"{"kind":"depolarizing","params":{"p":"x"}}"#).unwrap_err();
        assert!(err.to_string().contains("params.p"), "{err}");
    }

    #[test]
    fn round_trip_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.json");
        let spec = ChannelSpec::PartialDephasing { q: 0.3 };
        write_json(&path, &spec).unwrap();
        assert_eq!(read_json::<ChannelSpec>(&path).unwrap(), spec);
        assert!(std::fs::read_to_string(&path).unwrap().ends_with("}\n"));
    }
}
