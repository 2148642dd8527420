//! File formats. A graph is `{"n", "edges"}`; a list instance is
//! `{"graph", "lists"}`; a cover adds `"matchings"`; a lottery is
//! `{"n", "decks"}`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use listcolour::cover::RawCover;
use listcolour::solver::Instance;
use listcolour::{Cover, Graph, ListAssignment};

use crate::HarnessError;

pub fn read_value(path: &Path) -> Result<Value, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn decode<T: DeserializeOwned>(path: &Path, value: Value) -> Result<T, HarnessError> {
    serde_json::from_value(value).map_err(|e| HarnessError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    decode(path, read_value(path)?)
}

/// The unvalidated cover in a cover file.
pub fn read_raw_cover(path: &Path) -> Result<RawCover, HarnessError> {
    read_json(path)
}

pub fn load_instance(path: &Path) -> Result<Instance, HarnessError> {
    let value = read_value(path)?;
    if value.get("matchings").is_some() {
        let cover: Cover = decode(path, value)?;
        return Ok(Instance::Cover { cover });
    }
    let (Some(graph), Some(lists)) = (value.get("graph"), value.get("lists")) else {
        return Err(HarnessError::Json {
            path: path.to_path_buf(),
            message: "expected a list instance {graph, lists} or a cover {graph, lists, matchings}".into(),
        });
    };
    let graph: Graph = decode(path, graph.clone())?;
    let lists: Vec<Vec<u32>> = decode(path, lists.clone())?;
    let lists = ListAssignment::new(lists)?;
    lists.check_graph(&graph)?;
    Ok(Instance::List { graph, lists })
}

pub fn load_cover(path: &Path) -> Result<Cover, HarnessError> {
    match load_instance(path)? {
        Instance::Cover { cover } => Ok(cover),
        Instance::List { graph, lists } => Ok(Cover::canonical(&graph, &lists)?),
    }
}

#[derive(Serialize)]
struct ListFile<'a> {
    graph: &'a Graph,
    lists: &'a [Vec<u32>],
}

/// Serializes an instance in the file format [`load_instance`] reads.
pub fn instance_value(instance: &Instance) -> Value {
    match instance {
        Instance::List { graph, lists } => serde_json::to_value(ListFile {
            graph,
            lists: lists.lists(),
        }),
        Instance::Cover { cover } => serde_json::to_value(cover),
    }
    .expect("instances serialize")
}

pub fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}
