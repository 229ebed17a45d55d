use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Attribute, AttributeKind, AttributedGraph};

/// Which GXL node attributes make up the vertex attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexAttrHint {
    /// `x`/`y` coordinates if present, otherwise the first attribute as a label.
    Auto,
    Label(String),
    Vector(Vec<String>),
}

/// Which GXL edge attribute is the edge label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeAttrHint {
    /// The first attribute of the first edge that has one; unlabeled otherwise.
    Auto,
    Label(String),
    /// Every edge gets label 1.
    Unlabeled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeHints {
    pub vertex: VertexAttrHint,
    pub edge: EdgeAttrHint,
}

impl Default for ModeHints {
    fn default() -> Self {
        ModeHints {
            vertex: VertexAttrHint::Auto,
            edge: EdgeAttrHint::Auto,
        }
    }
}

impl ModeHints {
    /// Replaces `Auto` hints by what the given GXL document contains.
    pub fn resolve(&self, gxl: &str) -> Result<ModeHints> {
        if self.vertex != VertexAttrHint::Auto && self.edge != EdgeAttrHint::Auto {
            return Ok(self.clone());
        }
        let doc = roxmltree::Document::parse(gxl).map_err(|e| Error::Xml(e.to_string()))?;
        let attr_names = |node: roxmltree::Node| -> Vec<String> {
            node.children()
                .filter(|c| c.has_tag_name("attr"))
                .filter_map(|c| c.attribute("name").map(str::to_string))
                .collect()
        };
        let vertex = match &self.vertex {
            VertexAttrHint::Auto => {
                let names = doc
                    .descendants()
                    .find(|n| n.has_tag_name("node"))
                    .map(attr_names)
                    .unwrap_or_default();
                if names.iter().any(|n| n == "x") && names.iter().any(|n| n == "y") {
                    VertexAttrHint::Vector(vec!["x".into(), "y".into()])
                } else if let Some(first) = names.into_iter().next() {
                    VertexAttrHint::Label(first)
                } else {
                    return Err(Error::MissingAttribute {
                        name: "(any)".into(),
                        element: "node".into(),
                    });
                }
            }
            other => other.clone(),
        };
        let edge = match &self.edge {
            EdgeAttrHint::Auto => doc
                .descendants()
                .filter(|n| n.has_tag_name("edge"))
                .find_map(|e| attr_names(e).into_iter().next())
                .map_or(EdgeAttrHint::Unlabeled, EdgeAttrHint::Label),
            other => other.clone(),
        };
        Ok(ModeHints { vertex, edge })
    }
}

/// Maps label strings to integers `1, 2, ...` in first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelDictionary {
    ids: HashMap<String, u32>,
    names: Vec<String>,
}

impl LabelDictionary {
    pub fn id(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        self.names.push(name.to_string());
        let id = self.names.len() as u32;
        self.ids.insert(name.to_string(), id);
        id
    }

    /// Label string of integer label `id`.
    pub fn name(&self, id: u32) -> Option<&str> {
        id.checked_sub(1)
            .and_then(|i| self.names.get(i as usize))
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelDictionaries {
    pub vertex: LabelDictionary,
    pub edge: LabelDictionary,
}

fn attr_value<'a>(node: roxmltree::Node<'a, 'a>, name: &str) -> Option<&'a str> {
    node.children()
        .filter(|c| c.has_tag_name("attr") && c.attribute("name") == Some(name))
        .flat_map(|c| c.children().filter(|v| v.is_element()))
        .next()
        .map(|v| v.text().unwrap_or("").trim())
}

fn describe(node: roxmltree::Node) -> String {
    match node.attribute("id") {
        Some(id) => format!("{} `{id}`", node.tag_name().name()),
        None => match (node.attribute("from"), node.attribute("to")) {
            (Some(f), Some(t)) => format!("edge `{f}`-`{t}`"),
            _ => node.tag_name().name().to_string(),
        },
    }
}

fn required<'a>(node: roxmltree::Node<'a, 'a>, name: &str) -> Result<&'a str> {
    attr_value(node, name).ok_or_else(|| Error::MissingAttribute {
        name: name.to_string(),
        element: describe(node),
    })
}

/// Parses one GXL graph. Nodes are numbered in document order; edge direction is ignored.
pub fn parse_gxl(
    text: &str,
    hints: &ModeHints,
    dicts: &mut LabelDictionaries,
) -> Result<AttributedGraph> {
    let doc = roxmltree::Document::parse(text).map_err(|e| Error::Xml(e.to_string()))?;
    let graph = doc
        .descendants()
        .find(|n| n.has_tag_name("graph"))
        .ok_or_else(|| Error::Xml("no <graph> element".into()))?;
    let id = graph.attribute("id").unwrap_or("").to_string();

    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut vertices = Vec::new();
    for node in graph.children().filter(|n| n.has_tag_name("node")) {
        let node_id = node
            .attribute("id")
            .ok_or_else(|| Error::MissingAttribute {
                name: "id".into(),
                element: "node".into(),
            })?;
        let attr = match &hints.vertex {
            VertexAttrHint::Label(name) => Attribute::Label(dicts.vertex.id(required(node, name)?)),
            VertexAttrHint::Vector(names) => Attribute::Vector(
                names
                    .iter()
                    .map(|name| {
                        let raw = required(node, name)?;
                        raw.parse::<f64>().map_err(|_| Error::BadValue {
                            value: raw.to_string(),
                            expected: "a real number",
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            VertexAttrHint::Auto => {
                return Err(Error::InvalidConfig(
                    "vertex hint must be resolved first".into(),
                ))
            }
        };
        if index.insert(node_id, vertices.len()).is_some() {
            return Err(Error::Xml(format!("duplicate node id `{node_id}`")));
        }
        vertices.push(attr);
    }

    let mut edges = Vec::new();
    for edge in graph.children().filter(|n| n.has_tag_name("edge")) {
        let endpoint = |key: &str| -> Result<usize> {
            let v = edge.attribute(key).ok_or_else(|| Error::MissingAttribute {
                name: key.into(),
                element: "edge".into(),
            })?;
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint(v.to_string()))
        };
        let (from, to) = (endpoint("from")?, endpoint("to")?);
        let attr = match &hints.edge {
            EdgeAttrHint::Label(name) => Attribute::Label(dicts.edge.id(required(edge, name)?)),
            EdgeAttrHint::Unlabeled => Attribute::Label(1),
            EdgeAttrHint::Auto => {
                return Err(Error::InvalidConfig(
                    "edge hint must be resolved first".into(),
                ))
            }
        };
        edges.push((from, to, attr));
    }
    AttributedGraph::new(id, vertices, edges)
}

/// How edges of a dataset are attributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeMode {
    Label,
    Unlabeled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub graph: AttributedGraph,
    /// Index into [`DatasetDescriptor::class_names`].
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetDescriptor {
    pub name: String,
    /// `None` only when every graph is empty.
    pub attribute_mode: Option<AttributeKind>,
    pub edge_mode: EdgeMode,
    pub entries: Vec<DatasetEntry>,
    /// Class names in first-occurrence order.
    pub class_names: Vec<String>,
    pub dictionaries: LabelDictionaries,
}

impl DatasetDescriptor {
    pub fn graphs(&self) -> Vec<AttributedGraph> {
        self.entries.iter().map(|e| e.graph.clone()).collect()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Indices of the entries of class `c`, in dataset order.
    pub fn class_members(&self, c: usize) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| self.entries[i].class == c)
            .collect()
    }

    /// Keeps only the graphs of class `name`.
    pub fn restrict_to_class(&self, name: &str) -> Result<DatasetDescriptor> {
        let c = self
            .class_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidConfig(format!("no class named `{name}`")))?;
        Ok(DatasetDescriptor {
            entries: self
                .entries
                .iter()
                .filter(|e| e.class == c)
                .map(|e| DatasetEntry {
                    graph: e.graph.clone(),
                    class: 0,
                })
                .collect(),
            class_names: vec![name.to_string()],
            ..self.clone()
        })
    }
}

/// Parses a collection index (`<graph file=.. class=..>` or `<print file=.. class=..>`
/// entries) and every GXL file it references, relative to `base`.
pub fn parse_collection(
    index_text: &str,
    base: &Path,
    hints: &ModeHints,
) -> Result<DatasetDescriptor> {
    let doc = roxmltree::Document::parse(index_text).map_err(|e| Error::Xml(e.to_string()))?;
    let items: Vec<(&str, &str)> = doc
        .descendants()
        .filter(|n| n.is_element() && (n.has_tag_name("graph") || n.has_tag_name("print")))
        .filter_map(|n| {
            n.attribute("file")
                .map(|f| (f, n.attribute("class").unwrap_or("")))
        })
        .collect();
    if items.is_empty() {
        return Err(Error::EmptyCollection);
    }

    let mut dictionaries = LabelDictionaries::default();
    let mut resolved: Option<ModeHints> = None;
    let mut class_names: Vec<String> = Vec::new();
    let mut entries = Vec::with_capacity(items.len());
    for (file, class) in items {
        let path = base.join(file);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let h = match &resolved {
            Some(h) => h.clone(),
            None => {
                let h = hints.resolve(&text).map_err(|e| Error::in_file(&path, e))?;
                resolved = Some(h.clone());
                h
            }
        };
        let graph =
            parse_gxl(&text, &h, &mut dictionaries).map_err(|e| Error::in_file(&path, e))?;
        let graph = if graph.id().is_empty() {
            graph.with_id(file)
        } else {
            graph
        };
        let class = match class_names.iter().position(|c| c == class) {
            Some(c) => c,
            None => {
                class_names.push(class.to_string());
                class_names.len() - 1
            }
        };
        entries.push(DatasetEntry { graph, class });
    }

    let attribute_mode = entries.iter().find_map(|e| e.graph.vertex_kind());
    if let Some(kind) = attribute_mode {
        if let Some(bad) = entries
            .iter()
            .find(|e| e.graph.vertex_kind().is_some_and(|k| k != kind))
        {
            return Err(Error::AttributeMismatch(format!(
                "graph `{}` differs from the dataset's {kind:?} vertex attributes",
                bad.graph.id()
            )));
        }
    }
    let edge_mode = match resolved.map(|h| h.edge) {
        Some(EdgeAttrHint::Label(_)) => EdgeMode::Label,
        _ => EdgeMode::Unlabeled,
    };
    let name = doc
        .root_element()
        .attribute("name")
        .map(str::to_string)
        .unwrap_or_else(|| {
            base.file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        });
    Ok(DatasetDescriptor {
        name,
        attribute_mode,
        edge_mode,
        entries,
        class_names,
        dictionaries,
    })
}

/// Reads a collection index file and the graphs it references (relative to its directory).
pub fn load_collection(index: &Path, hints: &ModeHints) -> Result<DatasetDescriptor> {
    let text = std::fs::read_to_string(index).map_err(|e| Error::io(index, e))?;
    let base = index.parent().unwrap_or(Path::new("."));
    parse_collection(&text, base, hints)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LETTER: &str = r#"<?xml version="1.0"?>
<gxl><graph id="AP1_0000" edgeids="false" edgemode="undirected">
<node id="_0"><attr name="x"><float>0</float></attr><attr name="y"><float>0</float></attr></node>
<node id="_1"><attr name="x"><float>1</float></attr><attr name="y"><float>1</float></attr></node>
<edge from="_0" to="_1"/>
</graph></gxl>"#;

    const MOLECULE: &str = r#"<gxl><graph id="m">
<node id="a"><attr name="chem"><string>C</string></attr></node>
<node id="b"><attr name="chem"><string>C</string></attr></node>
<node id="c"><attr name="chem"><string>O</string></attr></node>
<edge from="a" to="b"><attr name="valence"><int>1</int></attr></edge>
<edge from="c" to="b"><attr name="valence"><int>2</int></attr></edge>
</graph></gxl>"#;

    #[test]
    fn letter_graph_vectors() {
        let hints = ModeHints::default().resolve(LETTER).unwrap();
        assert_eq!(
            hints.vertex,
            VertexAttrHint::Vector(vec!["x".into(), "y".into()])
        );
        assert_eq!(hints.edge, EdgeAttrHint::Unlabeled);
        let g = parse_gxl(LETTER, &hints, &mut LabelDictionaries::default()).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.vertex_attr(1), &Attribute::Vector(vec![1.0, 1.0]));
        assert_eq!(g.vertex_kind(), Some(AttributeKind::Vector(2)));
        assert_eq!(g.id(), "AP1_0000");
    }

    #[test]
    fn molecule_labels_in_first_occurrence_order() {
        let hints = ModeHints::default().resolve(MOLECULE).unwrap();
        assert_eq!(hints.vertex, VertexAttrHint::Label("chem".into()));
        assert_eq!(hints.edge, EdgeAttrHint::Label("valence".into()));
        let mut dicts = LabelDictionaries::default();
        let g = parse_gxl(MOLECULE, &hints, &mut dicts).unwrap();
        let labels: Vec<_> = g
            .vertex_attrs()
            .iter()
            .map(|a| a.as_label().unwrap())
            .collect();
        assert_eq!(labels, vec![1, 1, 2]);
        assert_eq!(dicts.vertex.name(1), Some("C"));
        assert_eq!(dicts.vertex.name(2), Some("O"));
        assert_eq!(g.edge_attr(1, 2), Some(&Attribute::Label(2)));
        assert_eq!(g.edge_attr(0, 1), Some(&Attribute::Label(1)));
    }

    #[test]
    fn dangling_and_duplicate_edges() {
        let hints = ModeHints::default().resolve(LETTER).unwrap();
        let dangling = LETTER.replace(r#"to="_1""#, r#"to="_7""#);
        assert!(matches!(
            parse_gxl(&dangling, &hints, &mut LabelDictionaries::default()),
            Err(Error::DanglingEndpoint(id)) if id == "_7"
        ));
        let dup = LETTER.replace(
            "<edge from=\"_0\" to=\"_1\"/>",
            "<edge from=\"_0\" to=\"_1\"/><edge from=\"_1\" to=\"_0\"/>",
        );
        assert!(matches!(
            parse_gxl(&dup, &hints, &mut LabelDictionaries::default()),
            Err(Error::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn missing_attribute_and_malformed_xml() {
        let hints = ModeHints {
            vertex: VertexAttrHint::Label("chem".into()),
            edge: EdgeAttrHint::Unlabeled,
        };
        assert!(matches!(
            parse_gxl(LETTER, &hints, &mut LabelDictionaries::default()),
            Err(Error::MissingAttribute { .. })
        ));
        assert!(matches!(
            parse_gxl("<gxl><graph>", &hints, &mut LabelDictionaries::default()),
            Err(Error::Xml(_))
        ));
    }

    #[test]
    fn collection_index() {
        let dir = tempfile::tempdir().unwrap();
        for (i, class) in ["A", "B", "A"].iter().enumerate() {
            std::fs::write(dir.path().join(format!("g{i}.gxl")), LETTER).unwrap();
            let _ = class;
        }
        let index = r#"<GraphCollection><fingerprints>
<print file="g0.gxl" class="A"/><print file="g1.gxl" class="B"/><print file="g2.gxl" class="A"/>
</fingerprints></GraphCollection>"#;
        let ds = parse_collection(index, dir.path(), &ModeHints::default()).unwrap();
        assert_eq!(ds.entries.len(), 3);
        assert_eq!(ds.class_names, vec!["A", "B"]);
        assert_eq!(ds.class_members(0), vec![0, 2]);
        assert_eq!(ds.attribute_mode, Some(AttributeKind::Vector(2)));
        assert_eq!(ds.edge_mode, EdgeMode::Unlabeled);

        assert!(matches!(
            parse_collection("<GraphCollection/>", dir.path(), &ModeHints::default()),
            Err(Error::EmptyCollection)
        ));
        let missing = r#"<c><graph file="nope.gxl" class="A"/></c>"#;
        let err = parse_collection(missing, dir.path(), &ModeHints::default()).unwrap_err();
        assert!(err.to_string().contains("nope.gxl"), "{err}");
    }
}
