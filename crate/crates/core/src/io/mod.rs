//! Dataset loading (GXL graphs, CXL-style collection indexes) and the native
//! line-oriented `gmg` graph format.

mod gxl;
mod native;

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;

pub use gxl::{
    load_collection, parse_collection, parse_gxl, DatasetDescriptor, DatasetEntry, EdgeAttrHint,
    EdgeMode, LabelDictionaries, LabelDictionary, ModeHints, VertexAttrHint,
};
pub use native::{read_graph, write_graph};

/// Reads graphs from `.gxl` files or native-format files. GXL labels share
/// one dictionary across all files, in argument order.
pub fn load_graphs(paths: &[&Path], hints: &ModeHints) -> Result<Vec<AttributedGraph>> {
    let mut dicts = LabelDictionaries::default();
    let mut resolved: Option<ModeHints> = None;
    paths
        .iter()
        .map(|&path| {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let parsed = if text.trim_start().starts_with("gmg ") {
                read_graph(&text).map(|g| g.with_id(id))
            } else {
                let hints = match &resolved {
                    Some(h) => Ok(h.clone()),
                    None => hints.resolve(&text),
                };
                hints.and_then(|h| {
                    let g = parse_gxl(&text, &h, &mut dicts);
                    resolved = Some(h);
                    g
                })
            };
            parsed.map_err(|e| Error::in_file(path, e))
        })
        .collect()
}
