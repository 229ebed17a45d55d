use std::fs;

use gmg_core::io::{
    load_collection, load_graphs, write_graph, EdgeMode, ModeHints, VertexAttrHint,
};
use gmg_core::{Attribute, AttributeKind, Error};

fn molecule(id: &str, atoms: &[&str], bonds: &[(usize, usize, u32)]) -> String {
    let mut s =
        format!("<?xml version=\"1.0\"?>\n<gxl>\n<graph id=\"{id}\" edgemode=\"undirected\">\n");
    for (i, a) in atoms.iter().enumerate() {
        s += &format!(
            "  <node id=\"n{i}\"><attr name=\"chem\"><string>{a}</string></attr></node>\n"
        );
    }
    for (i, j, v) in bonds {
        s += &format!("  <edge from=\"n{i}\" to=\"n{j}\"><attr name=\"valence\"><int>{v}</int></attr></edge>\n");
    }
    s + "</graph>\n</gxl>\n"
}

#[test]
fn molecule_collection_shares_dictionaries() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("a.gxl"),
        molecule("a", &["C", "C", "O"], &[(0, 1, 1), (1, 2, 2)]),
    )
    .unwrap();
    fs::write(
        dir.path().join("b.gxl"),
        molecule("b", &["N", "C"], &[(0, 1, 2)]),
    )
    .unwrap();
    fs::write(dir.path().join("c.gxl"), molecule("c", &["O"], &[])).unwrap();
    let index = r#"<?xml version="1.0"?>
<GraphCollection name="mols">
  <graphs>
    <graph file="a.gxl" class="x"/>
    <graph file="b.gxl" class="y"/>
    <graph file="c.gxl" class="x"/>
  </graphs>
</GraphCollection>"#;
    let path = dir.path().join("mols.cxl");
    fs::write(&path, index).unwrap();

    let ds = load_collection(&path, &ModeHints::default()).unwrap();
    assert_eq!(ds.name, "mols");
    assert_eq!(ds.attribute_mode, Some(AttributeKind::Label));
    assert_eq!(ds.edge_mode, EdgeMode::Label);
    assert_eq!(ds.class_names, vec!["x", "y"]);
    let b = &ds.entries[1].graph;
    assert_eq!(
        b.vertex_attrs(),
        &[Attribute::Label(3), Attribute::Label(1)]
    );
    assert_eq!(b.edge_attr(0, 1), Some(&Attribute::Label(2)));
    assert_eq!(ds.dictionaries.vertex.name(3), Some("N"));
    assert_eq!(ds.entries[2].graph.vertex_attrs(), &[Attribute::Label(2)]);

    let again = load_collection(&path, &ModeHints::default()).unwrap();
    assert_eq!(again.entries, ds.entries);
}

#[test]
fn parse_errors_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.gxl"),
        "<gxl><graph id=\"x\"><node id=\"a\">",
    )
    .unwrap();
    let path = dir.path().join("idx.cxl");
    fs::write(&path, r#"<c><graph file="bad.gxl" class="k"/></c>"#).unwrap();
    let err = load_collection(&path, &ModeHints::default()).unwrap_err();
    assert!(matches!(err, Error::InFile { .. }));
    assert!(err.to_string().contains("bad.gxl"), "{err}");
}

#[test]
fn mixed_gxl_and_native_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let gxl = dir.path().join("m.gxl");
    fs::write(&gxl, molecule("m", &["C", "O"], &[(0, 1, 1)])).unwrap();
    let graphs = load_graphs(&[gxl.as_path()], &ModeHints::default()).unwrap();
    let native = dir.path().join("m.gmg");
    fs::write(&native, write_graph(&graphs[0])).unwrap();
    let both = load_graphs(&[gxl.as_path(), native.as_path()], &ModeHints::default()).unwrap();
    assert_eq!(both[0].vertex_attrs(), both[1].vertex_attrs());
    assert_eq!(both[1].id(), "m");

    let hints = ModeHints {
        vertex: VertexAttrHint::Vector(vec!["x".into(), "y".into()]),
        ..Default::default()
    };
    let err = load_graphs(&[gxl.as_path()], &hints).unwrap_err();
    assert!(err.to_string().contains("m.gxl"), "{err}");
}
