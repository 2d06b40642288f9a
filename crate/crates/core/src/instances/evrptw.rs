//! Best-effort reader for the classic EVRPTW text format: a whitespace table
//! of depot (`d`), station (`f`) and customer (`c`) rows followed by
//! `/value/` parameter lines.

use super::generator::{GenSpec, NamedPoint, RoutePoint, RouteSet};
use super::GenError;

#[derive(Debug, Clone, PartialEq)]
pub struct EvrptwRow {
    pub id: String,
    pub kind: char,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvrptwData {
    pub rows: Vec<EvrptwRow>,
    /// Battery capacity.
    pub q: f64,
    pub load_capacity: f64,
    pub consumption_rate: f64,
    /// Time per unit of recharged energy.
    pub inverse_refuel_rate: f64,
    pub velocity: f64,
}

fn param(line: &str) -> Option<f64> {
    let a = line.find('/')?;
    let b = line[a + 1..].find('/')? + a + 1;
    line[a + 1..b].trim().parse().ok()
}

pub fn parse_evrptw(text: &str) -> Result<EvrptwData, GenError> {
    let mut rows = Vec::new();
    let (mut q, mut load, mut r, mut g, mut v) = (None, None, None, None, None);
    for (n, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() || fields[0] == "StringID" {
            continue;
        }
        if line.contains('/') {
            let value = param(line).ok_or_else(|| GenError::Parse { line: n + 1, detail: "bad parameter".into() })?;
            match fields[0] {
                "Q" => q = Some(value),
                "C" => load = Some(value),
                "r" => r = Some(value),
                "g" => g = Some(value),
                "v" => v = Some(value),
                _ => {}
            }
            continue;
        }
        if fields.len() < 8 {
            return Err(GenError::Parse { line: n + 1, detail: format!("expected 8 columns, found {}", fields.len()) });
        }
        let num = |i: usize| -> Result<f64, GenError> {
            fields[i].parse().map_err(|_| GenError::Parse { line: n + 1, detail: format!("'{}' is not a number", fields[i]) })
        };
        let kind = fields[1].chars().next().unwrap_or('?');
        if !matches!(kind, 'd' | 'f' | 'c') {
            return Err(GenError::Parse { line: n + 1, detail: format!("unknown row type '{}'", fields[1]) });
        }
        rows.push(EvrptwRow {
            id: fields[0].to_string(),
            kind,
            x: num(2)?,
            y: num(3)?,
            demand: num(4)?,
            ready: num(5)?,
            due: num(6)?,
            service: num(7)?,
        });
    }
    let missing = |what: &str| GenError::Parse { line: 0, detail: format!("missing parameter {what}") };
    if rows.iter().filter(|r| r.kind == 'd').count() != 1 {
        return Err(GenError::Parse { line: 0, detail: "expected exactly one depot row".into() });
    }
    Ok(EvrptwData {
        rows,
        q: q.ok_or_else(|| missing("Q"))?,
        load_capacity: load.ok_or_else(|| missing("C"))?,
        consumption_rate: r.ok_or_else(|| missing("r"))?,
        inverse_refuel_rate: g.ok_or_else(|| missing("g"))?,
        velocity: v.unwrap_or(1.0),
    })
}

/// Routes built by filling vehicles in sweep order up to the load capacity,
/// each visited in ready-time order. Stations other than the one at the depot
/// become extra stationary candidates.
pub fn evrptw_routes(data: &EvrptwData) -> RouteSet {
    let depot = data.rows.iter().find(|r| r.kind == 'd').unwrap();
    let mut customers: Vec<&EvrptwRow> = data.rows.iter().filter(|r| r.kind == 'c').collect();
    let angle = |r: &EvrptwRow| (r.y - depot.y).atan2(r.x - depot.x);
    customers.sort_by(|a, b| angle(a).total_cmp(&angle(b)).then(a.id.cmp(&b.id)));
    let mut routes: Vec<Vec<&EvrptwRow>> = Vec::new();
    let mut load = f64::INFINITY;
    for c in customers {
        if load + c.demand > data.load_capacity {
            routes.push(Vec::new());
            load = 0.0;
        }
        load += c.demand;
        routes.last_mut().unwrap().push(c);
    }
    let routes = routes
        .into_iter()
        .map(|mut r| {
            r.sort_by(|a, b| a.ready.total_cmp(&b.ready).then(a.id.cmp(&b.id)));
            r.into_iter()
                .map(|c| RoutePoint { name: c.id.clone(), x: c.x, y: c.y, earliest: None, latest: None })
                .collect()
        })
        .collect();
    let stations = data
        .rows
        .iter()
        .filter(|r| r.kind == 'f' && (r.x, r.y) != (depot.x, depot.y))
        .map(|r| NamedPoint { name: r.id.clone(), x: r.x, y: r.y })
        .collect();
    RouteSet { depot: (depot.x, depot.y), routes, stations }
}

/// Spec carrying the file's energy parameters over `base`.
pub fn evrptw_spec(data: &EvrptwData, routes: &RouteSet, base: &GenSpec) -> GenSpec {
    GenSpec {
        vehicles: routes.routes.len(),
        stops: routes.routes.iter().map(Vec::len).sum(),
        consumption_rate: data.consumption_rate,
        speed: data.velocity,
        stationary_rate: 1.0 / data.inverse_refuel_rate,
        ..base.clone()
    }
}
