use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{AcceleratorBuffer, Result};
use crate::sim::Counts;

/// Owned, serializable view of a buffer. Field order is the wire order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BufferSnapshot {
    pub name: String,
    pub size: usize,
    #[serde(rename = "Information")]
    pub information: BTreeMap<String, Value>,
    #[serde(rename = "Measurements")]
    pub measurements: Counts,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(rename = "AcceleratorBuffer")]
    buffer: BufferSnapshot,
}

impl From<&AcceleratorBuffer> for BufferSnapshot {
    fn from(b: &AcceleratorBuffer) -> Self {
        BufferSnapshot {
            name: b.name().to_owned(),
            size: b.size(),
            information: b.information(),
            measurements: b.measurements(),
        }
    }
}

/// Pretty JSON with two-space indentation and lexicographically sorted
/// measurement keys:
///
/// ```text
/// {
///   "AcceleratorBuffer": {
///     "name": "qrg_bmQBh7",
///     "size": 2,
///     "Information": {},
///     "Measurements": {
///       "00": 513,
///       "11": 511
///     }
///   }
/// }
/// ```
pub fn buffer_to_json(buffer: &AcceleratorBuffer) -> String {
    let doc = Document {
        buffer: buffer.into(),
    };
    serde_json::to_string_pretty(&doc).expect("buffer snapshot is always serializable")
}

pub fn buffer_from_json(text: &str) -> Result<BufferSnapshot> {
    let doc: Document = serde_json::from_str(text)?;
    Ok(doc.buffer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_buffer() {
        let b = AcceleratorBuffer::new("qrg_abcdef".into(), 2);
        let expected = "{\n  \"AcceleratorBuffer\": {\n    \"name\": \"qrg_abcdef\",\n    \"size\": 2,\n    \"Information\": {},\n    \"Measurements\": {}\n  }\n}";
        assert_eq!(buffer_to_json(&b), expected);
    }

    #[test]
    fn keys_are_sorted() {
        let b = AcceleratorBuffer::new("qrg_abcdef".into(), 2);
        b.merge_measurements(&[("11", 5), ("00", 3)].into_iter().collect());
        let text = buffer_to_json(&b);
        assert!(text.find("\"00\": 3").unwrap() < text.find("\"11\": 5").unwrap());
        let back = buffer_from_json(&text).unwrap();
        assert_eq!(back.measurements.get("11"), 5);
        assert_eq!(back.size, 2);
    }
}
