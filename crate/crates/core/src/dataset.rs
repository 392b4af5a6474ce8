//! TUDataset flat-file ingestion.
//!
//! A dataset `DS` is three files in one directory: `DS_A.txt` with one
//! `u, v` pair of global 1-based node ids per line, `DS_graph_indicator.txt`
//! with the 1-based graph id of every node, and `DS_graph_labels.txt` with one
//! integer class label per graph. Other files in the directory are ignored.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Debug)]
pub struct DatasetBundle {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub labels: Vec<i64>,
}

/// Summary row in the style of a dataset-characteristics table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetStats {
    pub name: String,
    pub graphs: usize,
    pub classes: usize,
    pub avg_nodes: f64,
    pub avg_edges: f64,
    pub isolated_nodes: usize,
    pub disconnected_graphs: usize,
}

impl DatasetBundle {
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, labels: Vec<i64>) -> Result<Self> {
        if graphs.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} graphs but {} labels",
                graphs.len(),
                labels.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            graphs,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn stats(&self) -> DatasetStats {
        let count = self.graphs.len().max(1) as f64;
        DatasetStats {
            name: self.name.clone(),
            graphs: self.graphs.len(),
            classes: self.labels.iter().collect::<BTreeSet<_>>().len(),
            avg_nodes: self.graphs.iter().map(Graph::node_count).sum::<usize>() as f64 / count,
            avg_edges: self.graphs.iter().map(Graph::edge_count).sum::<usize>() as f64 / count,
            isolated_nodes: self
                .graphs
                .iter()
                .map(|g| (0..g.node_count()).filter(|&v| g.degree(v) == 0).count())
                .sum(),
            disconnected_graphs: self
                .graphs
                .iter()
                .filter(|g| !crate::graph::is_connected(g))
                .count(),
        }
    }
}

fn file_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Ingest {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect())
}

fn parse_int<T: std::str::FromStr>(path: &Path, line: usize, tok: &str) -> Result<T> {
    tok.trim().parse().map_err(|_| Error::Format {
        path: path.to_path_buf(),
        line,
        message: format!("expected an integer, found {tok:?}"),
    })
}

pub fn load_tudataset(dir: impl AsRef<Path>, name: &str) -> Result<DatasetBundle> {
    let dir = dir.as_ref();
    let a_path = file_path(dir, name, "A");
    let ind_path = file_path(dir, name, "graph_indicator");
    let lab_path = file_path(dir, name, "graph_labels");

    let indicator_lines = read_lines(&ind_path)?;
    let edge_lines = read_lines(&a_path)?;
    let label_lines = read_lines(&lab_path)?;

    let mut indicator = Vec::with_capacity(indicator_lines.len());
    for (line, text) in &indicator_lines {
        indicator.push(parse_int::<usize>(&ind_path, *line, text)?);
    }
    let mut labels = Vec::with_capacity(label_lines.len());
    for (line, text) in &label_lines {
        labels.push(parse_int::<i64>(&lab_path, *line, text)?);
    }

    // graph ids are 1..=N; node ids are assigned locally in global order
    let graph_count = labels.len();
    let mut local = Vec::with_capacity(indicator.len());
    let mut sizes = vec![0usize; graph_count];
    for (i, &gid) in indicator.iter().enumerate() {
        if gid == 0 || gid > graph_count {
            return Err(Error::Format {
                path: ind_path.clone(),
                line: indicator_lines[i].0,
                message: format!("graph id {gid} outside 1..={graph_count}"),
            });
        }
        local.push(sizes[gid - 1]);
        sizes[gid - 1] += 1;
    }

    let mut graphs: Vec<Graph> = sizes.iter().map(|&n| Graph::new(n)).collect();
    for (line, text) in &edge_lines {
        let (a, b) = text.split_once(',').ok_or_else(|| Error::Format {
            path: a_path.clone(),
            line: *line,
            message: format!("expected \"u, v\", found {text:?}"),
        })?;
        let a: usize = parse_int(&a_path, *line, a)?;
        let b: usize = parse_int(&a_path, *line, b)?;
        let node_range = |x: usize| -> Result<usize> {
            if x == 0 || x > indicator.len() {
                return Err(Error::Format {
                    path: a_path.clone(),
                    line: *line,
                    message: format!("node id {x} outside 1..={}", indicator.len()),
                });
            }
            Ok(x - 1)
        };
        let (a, b) = (node_range(a)?, node_range(b)?);
        if indicator[a] != indicator[b] {
            return Err(Error::Format {
                path: a_path.clone(),
                line: *line,
                message: format!(
                    "edge joins graph {} and graph {}",
                    indicator[a], indicator[b]
                ),
            });
        }
        if a == b {
            continue;
        }
        let e = Edge::new(local[a], local[b])?;
        graphs[indicator[a] - 1].insert(e);
    }

    DatasetBundle::new(name, graphs, labels)
}

/// Writes the three core files of the flat format. Every undirected edge is
/// written in both orientations, as the published datasets do.
pub fn write_tudataset(bundle: &DatasetBundle, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let open = |suffix: &str| -> Result<(PathBuf, std::io::BufWriter<fs::File>)> {
        let path = file_path(dir, &bundle.name, suffix);
        let f = fs::File::create(&path).map_err(|source| Error::Output {
            path: path.clone(),
            source,
        })?;
        Ok((path, std::io::BufWriter::new(f)))
    };
    let wrap = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Output { path, source }
    };

    let (a_path, mut a) = open("A")?;
    let (i_path, mut ind) = open("graph_indicator")?;
    let (l_path, mut lab) = open("graph_labels")?;
    let mut offset = 0;
    for (gi, g) in bundle.graphs.iter().enumerate() {
        for _ in 0..g.node_count() {
            writeln!(ind, "{}", gi + 1).map_err(wrap(&i_path))?;
        }
        for e in g.edges() {
            let (u, v) = (e.u() + offset + 1, e.v() + offset + 1);
            writeln!(a, "{u}, {v}\n{v}, {u}").map_err(wrap(&a_path))?;
        }
        offset += g.node_count();
    }
    for l in &bundle.labels {
        writeln!(lab, "{l}").map_err(wrap(&l_path))?;
    }
    a.flush().map_err(wrap(&a_path))?;
    ind.flush().map_err(wrap(&i_path))?;
    lab.flush().map_err(wrap(&l_path))?;
    Ok(())
}
