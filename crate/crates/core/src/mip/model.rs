use std::collections::HashMap;

use crate::model::{Instance, VertexId};

use super::MipError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Constraint family, used for naming rows and for structural checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Flow,
    Visit,
    Depot,
    Inverter,
    Order,
    Time,
    SocLower,
    SocUpper,
    SocMin,
    Init,
    ChargeRate,
    ChargeOpen,
    SegmentRate,
    SegmentOpen,
    SegmentFull,
    SegmentPrefix,
    Copy,
    TariffChoice,
    TariffSplit,
    TariffOpen,
    TariffAfter,
    TariffBefore,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::Flow => "flow",
            Family::Visit => "visit",
            Family::Depot => "depot",
            Family::Inverter => "inverter",
            Family::Order => "order",
            Family::Time => "time",
            Family::SocLower => "socge",
            Family::SocUpper => "socle",
            Family::SocMin => "socmin",
            Family::Init => "init",
            Family::ChargeRate => "chrate",
            Family::ChargeOpen => "chopen",
            Family::SegmentRate => "segrate",
            Family::SegmentOpen => "segopen",
            Family::SegmentFull => "segfull",
            Family::SegmentPrefix => "segprefix",
            Family::Copy => "copy",
            Family::TariffChoice => "tchoice",
            Family::TariffSplit => "tsplit",
            Family::TariffOpen => "topen",
            Family::TariffAfter => "tafter",
            Family::TariffBefore => "tbefore",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub family: Family,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MipOptions {
    /// Extra copies of every charging station, so a vehicle can use one
    /// station more than once. Copies have no installation cost and can only
    /// be built together with their original.
    pub copies: usize,
    /// A traversed built segment must deliver its full charge.
    pub full_dynamic_charge: bool,
    /// Built segments of a dynamic station must form a prefix.
    pub prefix_segments: bool,
}

impl Default for MipOptions {
    fn default() -> Self {
        MipOptions { copies: 1, full_dynamic_charge: true, prefix_segments: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Position(usize),
    Stationary { station: usize, copy: usize },
    SegmentPoint { station: usize, copy: usize, index: usize },
}

/// A vertex of one vehicle's model network.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub vertex: VertexId,
    pub label: String,
    pub tau: usize,
    pub rho: usize,
    /// Charging periods and recharged energy at stationary nodes.
    pub dtau: Option<usize>,
    pub drho: Option<usize>,
    /// Price-period selection and per-period recharge under a time-varying
    /// tariff.
    pub tariff: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcSegment {
    pub station: usize,
    pub copy: usize,
    pub index: usize,
    pub drho: usize,
    pub tariff: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipArc {
    pub from: usize,
    pub to: usize,
    pub time: f64,
    pub consumption: f64,
    pub x: usize,
    pub segment: Option<ArcSegment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleNet {
    pub nodes: Vec<Node>,
    pub arcs: Vec<MipArc>,
    /// Upper bound on every time variable of the vehicle.
    pub horizon: f64,
}

impl VehicleNet {
    pub fn positions(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::Position(_))).count()
    }

    pub fn out_arcs(&self, node: usize) -> impl Iterator<Item = &MipArc> + '_ {
        self.arcs.iter().filter(move |a| a.from == node)
    }
}

/// Build variables of a station and its copies, indexed by copy.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicVars {
    pub inverter: Vec<usize>,
    pub segments: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipModel {
    pub name: String,
    pub options: MipOptions,
    pub vars: Vec<Var>,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, f64)>,
    pub stationary: Vec<Vec<usize>>,
    pub dynamic: Vec<DynamicVars>,
    pub vehicles: Vec<VehicleNet>,
    /// Tariff breakpoints, empty for a constant price.
    pub tariff: Vec<(f64, f64)>,
    index: HashMap<String, usize>,
}

impl MipModel {
    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn rows_of(&self, family: Family) -> impl Iterator<Item = &Row> + '_ {
        self.rows.iter().filter(move |r| r.family == family)
    }

    pub fn count(&self, family: Family) -> usize {
        self.rows_of(family).count()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Names of the rows, bounds and integrality requirements `values`
    /// violates by more than `tol`.
    pub fn violations(&self, values: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (var, v) in self.vars.iter().zip(values) {
            if *v < var.lower - tol || *v > var.upper + tol {
                out.push(format!("bound {} = {v}", var.name));
            }
            if var.kind != VarKind::Continuous && (v - v.round()).abs() > tol {
                out.push(format!("integrality {} = {v}", var.name));
            }
        }
        for r in &self.rows {
            let lhs: f64 = r.terms.iter().map(|&(v, c)| c * values[v]).sum();
            let slack = tol * f64::max(1.0, r.rhs.abs());
            let ok = match r.sense {
                Sense::Le => lhs <= r.rhs + slack,
                Sense::Ge => lhs >= r.rhs - slack,
                Sense::Eq => (lhs - r.rhs).abs() <= slack,
            };
            if !ok {
                out.push(format!("row {}: {lhs} {} {}", r.name, r.sense.symbol(), r.rhs));
            }
        }
        out
    }
}

struct Builder {
    vars: Vec<Var>,
    rows: Vec<Row>,
    objective: Vec<(usize, f64)>,
    index: HashMap<String, usize>,
}

impl Builder {
    fn var(&mut self, name: String, kind: VarKind, lower: f64, upper: f64) -> usize {
        let id = self.vars.len();
        let (lower, upper) = if kind == VarKind::Binary { (0.0, 1.0) } else { (lower, upper) };
        let previous = self.index.insert(name.clone(), id);
        debug_assert!(previous.is_none(), "duplicate variable {name}");
        self.vars.push(Var { name, kind, lower, upper });
        id
    }

    fn row(&mut self, family: Family, suffix: &str, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        let name = format!("{}_{suffix}", family.prefix());
        self.rows.push(Row { name, family, terms, sense, rhs });
    }

    fn cost(&mut self, v: usize, c: f64) {
        if c != 0.0 {
            self.objective.push((v, c));
        }
    }
}

/// Latest time any ASAP schedule of the vehicle can reach: the last finite
/// window when all windows are finite, else a bound from the slowest detour
/// and longest charge per gap.
fn horizon(instance: &Instance, k: usize) -> f64 {
    let route = &instance.vehicles[k].stops;
    if route.iter().all(|s| s.latest.is_finite()) {
        return route.iter().map(|s| s.latest).fold(0.0, f64::max);
    }
    let net = &instance.network;
    let e = &instance.energy;
    let span = e.q_max - e.q_min;
    let mut h = route.iter().map(|s| s.earliest).fold(0.0, f64::max);
    for w in route.windows(2) {
        let (a, b) = (w[0].vertex, w[1].vertex);
        let mut worst = net.leg(a, b).map_or(0.0, |l| l.0);
        for st in &instance.stationary {
            if let (Some(x), Some(y)) = (net.leg(a, st.vertex), net.leg(st.vertex, b)) {
                let charge = (span / (st.rate * e.period)).ceil() * e.period;
                worst = worst.max(x.0 + y.0 + charge);
            }
        }
        for d in &instance.dynamic {
            if let (Some(x), Some(y)) = (net.leg(a, d.start()), net.leg(d.end(), b)) {
                let inner: f64 = d.segments.iter().filter_map(|s| net.leg(s.from, s.to)).map(|l| l.0).sum();
                worst = worst.max(x.0 + inner + y.0);
            }
        }
        h += worst;
    }
    h
}

/// Builds the time-discrete model of the whole instance.
///
/// Each vehicle gets its own network: one node per route position, one node
/// per stationary station copy, and one node per segment point of every
/// dynamic station copy. Arcs lead from a position to the next position,
/// into any charging node, and from any charging node back to a later
/// position. A stationary station sitting at a position's vertex cannot be
/// entered from that position.
pub fn build_mip(instance: &Instance, options: MipOptions) -> Result<MipModel, MipError> {
    instance.validate()?;
    let net = &instance.network;
    let e = &instance.energy;
    let copies = options.copies + 1;
    let tariff: Vec<(f64, f64)> = if instance.recharge_price.is_constant() {
        Vec::new()
    } else {
        instance.recharge_price.points().iter().map(|p| (p.start, p.price)).collect()
    };
    let flat_price = instance.recharge_price.min_price();
    let mut b = Builder { vars: Vec::new(), rows: Vec::new(), objective: Vec::new(), index: HashMap::new() };

    let mut stationary = Vec::new();
    for (f, st) in instance.stationary.iter().enumerate() {
        let ids: Vec<usize> =
            (0..copies).map(|c| b.var(format!("y_s{f}c{c}"), VarKind::Binary, 0.0, 1.0)).collect();
        b.cost(ids[0], st.cost);
        stationary.push(ids);
    }
    let mut dynamic = Vec::new();
    for (f, d) in instance.dynamic.iter().enumerate() {
        let inverter: Vec<usize> =
            (0..copies).map(|c| b.var(format!("w_d{f}c{c}"), VarKind::Binary, 0.0, 1.0)).collect();
        let segments: Vec<Vec<usize>> = (0..copies)
            .map(|c| {
                (0..d.segments.len()).map(|t| b.var(format!("z_d{f}c{c}_{t}"), VarKind::Binary, 0.0, 1.0)).collect()
            })
            .collect();
        b.cost(inverter[0], d.cost);
        for (t, s) in d.segments.iter().enumerate() {
            b.cost(segments[0][t], s.cost);
        }
        dynamic.push(DynamicVars { inverter, segments });
    }

    let mut vehicles = Vec::new();
    for (k, vehicle) in instance.vehicles.iter().enumerate() {
        let route = &vehicle.stops;
        let last = route.len() - 1;
        let h = horizon(instance, k);
        let mut nodes: Vec<Node> = Vec::new();
        let mut node = |b: &mut Builder, kind: NodeKind, vertex: VertexId, label: String, lo: f64, hi: f64| {
            let tau = b.var(format!("tau_{k}_{label}"), VarKind::Continuous, lo, hi);
            let rho = b.var(format!("rho_{k}_{label}"), VarKind::Continuous, e.q_min, e.q_max);
            let (mut dtau, mut drho) = (None, None);
            if matches!(kind, NodeKind::Stationary { .. }) {
                dtau = Some(b.var(format!("dtau_{k}_{label}"), VarKind::Integer, 0.0, f64::INFINITY));
                drho = Some(b.var(format!("drho_{k}_{label}"), VarKind::Continuous, 0.0, f64::INFINITY));
            }
            nodes.push(Node { kind, vertex, label, tau, rho, dtau, drho, tariff: Vec::new() });
            nodes.len() - 1
        };
        for (p, s) in route.iter().enumerate() {
            node(&mut b, NodeKind::Position(p), s.vertex, format!("p{p}"), s.earliest, s.latest.min(h));
        }
        let mut stat_nodes = Vec::new();
        for (f, st) in instance.stationary.iter().enumerate() {
            for c in 0..copies {
                let n = node(&mut b, NodeKind::Stationary { station: f, copy: c }, st.vertex, format!("s{f}c{c}"), 0.0, h);
                stat_nodes.push(n);
            }
        }
        let mut dyn_nodes = Vec::new();
        for (f, d) in instance.dynamic.iter().enumerate() {
            for c in 0..copies {
                let mut points = Vec::new();
                for i in 0..=d.segments.len() {
                    let v = if i == 0 { d.start() } else { d.segments[i - 1].to };
                    let kind = NodeKind::SegmentPoint { station: f, copy: c, index: i };
                    points.push(node(&mut b, kind, v, format!("d{f}c{c}n{i}"), 0.0, h));
                }
                dyn_nodes.push((f, c, points));
            }
        }

        let mut arcs: Vec<MipArc> = Vec::new();
        let mut arc = |b: &mut Builder, nodes: &[Node], from: usize, to: usize, segment: Option<(usize, usize, usize)>| {
            let Some((time, consumption)) = net.leg(nodes[from].vertex, nodes[to].vertex) else { return };
            let x = b.var(format!("x_{k}_{}_{}", nodes[from].label, nodes[to].label), VarKind::Binary, 0.0, 1.0);
            let segment = segment.map(|(station, copy, index)| {
                let drho = b.var(
                    format!("drho_{k}_{}_{}", nodes[from].label, nodes[to].label),
                    VarKind::Continuous,
                    0.0,
                    f64::INFINITY,
                );
                ArcSegment { station, copy, index, drho, tariff: Vec::new() }
            });
            arcs.push(MipArc { from, to, time, consumption, x, segment });
        };
        for p in 0..last {
            arc(&mut b, &nodes, p, p + 1, None);
            for &n in &stat_nodes {
                if nodes[n].vertex != route[p].vertex {
                    arc(&mut b, &nodes, p, n, None);
                }
            }
            for (_, _, points) in &dyn_nodes {
                arc(&mut b, &nodes, p, points[0], None);
            }
        }
        for &n in &stat_nodes {
            for p in 1..=last {
                arc(&mut b, &nodes, n, p, None);
            }
        }
        for &(f, c, ref points) in &dyn_nodes {
            for i in 0..points.len() - 1 {
                arc(&mut b, &nodes, points[i], points[i + 1], Some((f, c, i)));
            }
            for p in 1..=last {
                arc(&mut b, &nodes, points[points.len() - 1], p, None);
            }
        }

        if !tariff.is_empty() {
            for &n in &stat_nodes {
                let label = nodes[n].label.clone();
                nodes[n].tariff = tariff_vars(&mut b, &format!("{k}_{label}"), tariff.len());
            }
            for a in arcs.iter_mut() {
                if let Some(seg) = a.segment.as_mut() {
                    let label = format!("{k}_{}_{}", nodes[a.from].label, nodes[a.to].label);
                    seg.tariff = tariff_vars(&mut b, &label, tariff.len());
                }
            }
        }

        for a in &arcs {
            b.cost(a.x, e.consumption_price * a.consumption);
            if let Some(seg) = &a.segment {
                charge_cost(&mut b, seg.drho, &seg.tariff, &tariff, flat_price);
            }
        }
        for n in &nodes {
            if let Some(drho) = n.drho {
                charge_cost(&mut b, drho, &n.tariff, &tariff, flat_price);
            }
        }

        let net_k = VehicleNet { nodes, arcs, horizon: h };
        vehicle_rows(&mut b, instance, k, &net_k, &stationary, &dynamic, &options, &tariff);
        vehicles.push(net_k);
    }

    for (f, d) in instance.dynamic.iter().enumerate() {
        let m = d.segments.len() as f64;
        for c in 0..copies {
            let mut terms: Vec<(usize, f64)> = dynamic[f].segments[c].iter().map(|&z| (z, 1.0)).collect();
            terms.push((dynamic[f].inverter[c], -m));
            b.row(Family::Inverter, &format!("d{f}c{c}"), terms, Sense::Le, 0.0);
        }
    }
    for (f, ids) in stationary.iter().enumerate() {
        for c in 1..copies {
            b.row(Family::Copy, &format!("s{f}c{c}"), vec![(ids[c], 1.0), (ids[0], -1.0)], Sense::Le, 0.0);
        }
    }
    for (f, dv) in dynamic.iter().enumerate() {
        for c in 1..copies {
            b.row(Family::Copy, &format!("d{f}c{c}"), vec![(dv.inverter[c], 1.0), (dv.inverter[0], -1.0)], Sense::Le, 0.0);
            for t in 0..dv.segments[c].len() {
                let terms = vec![(dv.segments[c][t], 1.0), (dv.segments[0][t], -1.0)];
                b.row(Family::Copy, &format!("d{f}c{c}_{t}"), terms, Sense::Le, 0.0);
            }
        }
        if options.prefix_segments {
            for t in 1..dv.segments[0].len() {
                let terms = vec![(dv.segments[0][t], 1.0), (dv.segments[0][t - 1], -1.0)];
                b.row(Family::SegmentPrefix, &format!("d{f}_{t}"), terms, Sense::Le, 0.0);
            }
        }
    }
    Ok(MipModel {
        name: instance.name.clone(),
        options,
        vars: b.vars,
        rows: b.rows,
        objective: b.objective,
        stationary,
        dynamic,
        vehicles,
        tariff,
        index: b.index,
    })
}

fn tariff_vars(b: &mut Builder, label: &str, periods: usize) -> Vec<(usize, usize)> {
    (0..periods)
        .map(|t| {
            let u = b.var(format!("u_{label}_t{t}"), VarKind::Binary, 0.0, 1.0);
            let r = b.var(format!("drho_{label}_t{t}"), VarKind::Continuous, 0.0, f64::INFINITY);
            (u, r)
        })
        .collect()
}

fn charge_cost(b: &mut Builder, drho: usize, split: &[(usize, usize)], tariff: &[(f64, f64)], flat: f64) {
    if split.is_empty() {
        b.cost(drho, flat);
    } else {
        for (&(_, r), &(_, price)) in split.iter().zip(tariff) {
            b.cost(r, price);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn vehicle_rows(
    b: &mut Builder,
    instance: &Instance,
    k: usize,
    net: &VehicleNet,
    stationary: &[Vec<usize>],
    dynamic: &[DynamicVars],
    options: &MipOptions,
    tariff: &[(f64, f64)],
) {
    let e = &instance.energy;
    let span = e.q_max - e.q_min;
    let nodes = &net.nodes;
    let last = net.positions() - 1;
    let h = net.horizon;
    let lab = |n: usize| &nodes[n].label;

    for (n, node) in nodes.iter().enumerate() {
        if matches!(node.kind, NodeKind::Position(p) if p == 0 || p == last) {
            continue;
        }
        let mut terms: Vec<(usize, f64)> = net.arcs.iter().filter(|a| a.to == n).map(|a| (a.x, 1.0)).collect();
        terms.extend(net.out_arcs(n).map(|a| (a.x, -1.0)));
        b.row(Family::Flow, &format!("{k}_{}", lab(n)), terms, Sense::Eq, 0.0);
    }
    for p in 0..last {
        let terms = net.out_arcs(p).map(|a| (a.x, 1.0)).collect();
        b.row(Family::Visit, &format!("{k}_{}", lab(p)), terms, Sense::Ge, 1.0);
    }
    let terms = net.out_arcs(0).map(|a| (a.x, 1.0)).collect();
    b.row(Family::Depot, &k.to_string(), terms, Sense::Eq, 1.0);
    for p in 1..last {
        let terms = vec![(nodes[p].tau, 1.0), (nodes[p + 1].tau, -1.0)];
        b.row(Family::Order, &format!("{k}_{}", lab(p)), terms, Sense::Le, 0.0);
    }

    for a in &net.arcs {
        let (i, j) = (&nodes[a.from], &nodes[a.to]);
        let suffix = format!("{k}_{}_{}", i.label, j.label);
        let big_t = h + a.time;
        let mut terms = vec![(i.tau, 1.0), (j.tau, -1.0), (a.x, big_t)];
        if let Some(dt) = j.dtau {
            terms.push((dt, e.period));
        }
        b.row(Family::Time, &suffix, terms, Sense::Le, big_t - a.time);

        let big_q = span + a.consumption;
        let mut soc = vec![(i.rho, 1.0), (j.rho, -1.0)];
        if let Some(seg) = &a.segment {
            soc.push((seg.drho, 1.0));
        }
        if let Some(dr) = j.drho {
            soc.push((dr, 1.0));
        }
        let mut ge = soc.clone();
        ge.push((a.x, -big_q));
        b.row(Family::SocLower, &suffix, ge, Sense::Ge, a.consumption - big_q);
        let mut le = soc;
        le.push((a.x, big_q));
        b.row(Family::SocUpper, &suffix, le, Sense::Le, a.consumption + big_q);
    }

    for node in nodes {
        if let (Some(dt), Some(dr), NodeKind::Stationary { station, copy }) = (node.dtau, node.drho, node.kind) {
            let suffix = format!("{k}_{}", node.label);
            b.row(Family::SocMin, &suffix, vec![(node.rho, 1.0), (dr, -1.0)], Sense::Ge, e.q_min);
            let rate = instance.stationary[station].rate;
            b.row(Family::ChargeRate, &suffix, vec![(dr, 1.0), (dt, -e.period * rate)], Sense::Eq, 0.0);
            b.row(Family::ChargeOpen, &suffix, vec![(dr, 1.0), (stationary[station][copy], -span)], Sense::Le, 0.0);
            let start = [(node.tau, 1.0), (dt, -e.period)];
            tariff_rows(b, &suffix, dr, &node.tariff, tariff, &start, h, span);
        }
    }
    b.row(Family::Init, &k.to_string(), vec![(nodes[0].rho, 1.0)], Sense::Eq, e.q_init);

    for a in &net.arcs {
        let Some(seg) = &a.segment else { continue };
        let suffix = format!("{k}_{}_{}", lab(a.from), lab(a.to));
        let cap = instance.dynamic[seg.station].rate * a.time;
        let z = dynamic[seg.station].segments[seg.copy][seg.index];
        b.row(Family::SegmentRate, &suffix, vec![(seg.drho, 1.0), (a.x, -cap)], Sense::Le, 0.0);
        b.row(Family::SegmentOpen, &suffix, vec![(seg.drho, 1.0), (z, -span)], Sense::Le, 0.0);
        if options.full_dynamic_charge {
            let z0 = dynamic[seg.station].segments[0][seg.index];
            b.row(Family::SegmentFull, &suffix, vec![(seg.drho, 1.0), (a.x, -cap), (z0, -cap)], Sense::Ge, -cap);
        }
        let start = [(nodes[a.from].tau, 1.0)];
        tariff_rows(b, &suffix, seg.drho, &seg.tariff, tariff, &start, h, span);
    }
}

/// Rows selecting the tariff period containing the charge start `start`
/// (a linear expression) and splitting the recharge `drho` by period.
#[allow(clippy::too_many_arguments)]
fn tariff_rows(
    b: &mut Builder,
    suffix: &str,
    drho: usize,
    split: &[(usize, usize)],
    tariff: &[(f64, f64)],
    start: &[(usize, f64)],
    h: f64,
    span: f64,
) {
    if split.is_empty() {
        return;
    }
    b.row(Family::TariffChoice, suffix, split.iter().map(|&(u, _)| (u, 1.0)).collect(), Sense::Eq, 1.0);
    let mut terms = vec![(drho, 1.0)];
    terms.extend(split.iter().map(|&(_, r)| (r, -1.0)));
    b.row(Family::TariffSplit, suffix, terms, Sense::Eq, 0.0);
    for (t, &(u, r)) in split.iter().enumerate() {
        let s = format!("{suffix}_t{t}");
        b.row(Family::TariffOpen, &s, vec![(r, 1.0), (u, -span)], Sense::Le, 0.0);
        if t > 0 {
            let mut terms = start.to_vec();
            terms.push((u, -tariff[t].0));
            b.row(Family::TariffAfter, &s, terms, Sense::Ge, 0.0);
        }
        if t + 1 < split.len() {
            let mut terms = start.to_vec();
            terms.push((u, h));
            b.row(Family::TariffBefore, &s, terms, Sense::Le, tariff[t + 1].0 + h);
        }
    }
}
