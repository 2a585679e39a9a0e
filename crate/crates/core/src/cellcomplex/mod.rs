//! Oriented cell complexes with integer boundary algebra.
//!
//! A complex stores sites (0-cells), directed links (1-cells) and plaquettes
//! (2-cells). Every cell carries one fixed orientation; the reverse of a
//! stored link is never itself a cell. Each plaquette records its boundary as
//! an ordered closed walk of signed links, from which the boundary matrix
//! column is derived. All chain arithmetic is exact.

pub mod hnf;

use std::collections::BTreeMap;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use hnf::{column_echelon, ColumnEchelon, IntMatrix};

/// A directed 1-cell from `from` to `to` (sites may coincide: self-loop).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub from: usize,
    pub to: usize,
}

/// A link reference with a traversal sign: `+1` along the stored direction,
/// `-1` against it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub link: usize,
    pub sign: i8,
}

impl Step {
    pub fn forward(link: usize) -> Self {
        Self { link, sign: 1 }
    }

    pub fn backward(link: usize) -> Self {
        Self { link, sign: -1 }
    }
}

/// A 2-cell: an ordered closed boundary walk plus an optional area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plaquette {
    pub walk: Vec<Step>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
}

/// Sparse integer chain of fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerChain {
    degree: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl IntegerChain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: BTreeMap::new() }
    }

    pub fn from_pairs(degree: usize, pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut c = Self::zero(degree);
        for (cell, coeff) in pairs {
            c.add_term(cell, coeff);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, cell: usize) -> i64 {
        self.coeffs.get(&cell).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&c, &v)| (c, v))
    }

    pub fn add_term(&mut self, cell: usize, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(cell).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&cell);
        }
    }

    pub fn scaled(&self, factor: i64) -> Self {
        if factor == 0 {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(&c, &v)| (c, v * factor)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.degree, other.degree);
        for (cell, coeff) in other.iter() {
            self.add_term(cell, coeff);
        }
    }

    pub fn l1_norm(&self) -> i64 {
        self.coeffs.values().map(|v| v.abs()).sum()
    }
}

/// A closed oriented loop given as an ordered walk of signed links.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub steps: Vec<Step>,
}

impl Contour {
    /// The contour as a degree-1 chain (a link traversed twice accumulates).
    pub fn as_chain(&self) -> IntegerChain {
        IntegerChain::from_pairs(1, self.steps.iter().map(|s| (s.link, s.sign as i64)))
    }
}

/// Oriented cell complex with cells of dimension at most two.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellComplex {
    sites: usize,
    links: Vec<Link>,
    plaquettes: Vec<Plaquette>,
}

impl CellComplex {
    /// Builds a complex from explicit cells, validating the closed-walk
    /// structure of every plaquette.
    pub fn new(sites: usize, links: Vec<Link>, plaquettes: Vec<Plaquette>) -> Result<Self> {
        let c = Self { sites, links, plaquettes };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        for (i, l) in self.links.iter().enumerate() {
            if l.from >= self.sites || l.to >= self.sites {
                return Err(Error::InvalidParameter(format!(
                    "link {i} endpoint out of range"
                )));
            }
        }
        for (p, plq) in self.plaquettes.iter().enumerate() {
            if plq.walk.is_empty() {
                return Err(Error::InvalidParameter(format!("plaquette {p} has empty walk")));
            }
            let mut site = self.step_start(&plq.walk[0])?;
            let first = site;
            for step in &plq.walk {
                if self.step_start(step)? != site {
                    return Err(Error::InvalidParameter(format!(
                        "plaquette {p} walk is not connected"
                    )));
                }
                site = self.step_end(step)?;
            }
            if site != first {
                return Err(Error::InvalidParameter(format!("plaquette {p} walk is not closed")));
            }
        }
        Ok(())
    }

    fn step_start(&self, s: &Step) -> Result<usize> {
        let l = self
            .links
            .get(s.link)
            .ok_or_else(|| Error::InvalidParameter(format!("link index {} out of range", s.link)))?;
        Ok(if s.sign >= 0 { l.from } else { l.to })
    }

    fn step_end(&self, s: &Step) -> Result<usize> {
        let l = self
            .links
            .get(s.link)
            .ok_or_else(|| Error::InvalidParameter(format!("link index {} out of range", s.link)))?;
        Ok(if s.sign >= 0 { l.to } else { l.from })
    }

    pub fn num_sites(&self) -> usize {
        self.sites
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.sites as i64 - self.links.len() as i64 + self.plaquettes.len() as i64
    }

    /// Ordered site sequence visited by a plaquette's boundary walk.
    pub fn plaquette_sites(&self, p: usize) -> Vec<usize> {
        self.plaquettes[p]
            .walk
            .iter()
            .map(|s| self.step_start(s).expect("validated"))
            .collect()
    }

    /// Boundary matrix column of plaquette `p`: the signed multiset of links
    /// in its walk.
    pub fn plaquette_boundary(&self, p: usize) -> IntegerChain {
        IntegerChain::from_pairs(
            1,
            self.plaquettes[p].walk.iter().map(|s| (s.link, s.sign as i64)),
        )
    }

    /// Boundary of a chain of degree 1 or 2 (exact integer arithmetic).
    pub fn boundary(&self, chain: &IntegerChain) -> Result<IntegerChain> {
        match chain.degree() {
            1 => {
                let mut out = IntegerChain::zero(0);
                for (link, coeff) in chain.iter() {
                    let l = self.links[link];
                    out.add_term(l.to, coeff);
                    out.add_term(l.from, -coeff);
                }
                Ok(out)
            }
            2 => {
                let mut out = IntegerChain::zero(1);
                for (p, coeff) in chain.iter() {
                    out.add_assign(&self.plaquette_boundary(p).scaled(coeff));
                }
                Ok(out)
            }
            d => Err(Error::DegreeMismatch { chain: d, expected: 2 }),
        }
    }

    /// Deterministic breadth-first spanning tree from site 0, as link indices.
    pub fn spanning_tree(&self) -> Result<Vec<usize>> {
        self.spanning_tree_from_order(|adj| adj.to_vec())
    }

    /// Spanning tree picking, over a breadth-first sweep, the smallest-index
    /// link joining a new site. With the builders' site-major link order this
    /// produces axis-aligned trees that keep gauge-fixed integrands local.
    pub fn min_index_spanning_tree(&self) -> Result<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.sites).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut tree = Vec::new();
        for (i, l) in self.links.iter().enumerate() {
            let (a, b) = (find(&mut parent, l.from), find(&mut parent, l.to));
            if a != b {
                parent[a] = b;
                tree.push(i);
            }
        }
        let root = find(&mut parent, 0);
        for s in 0..self.sites {
            if find(&mut parent, s) != root {
                return Err(Error::Disconnected { site: s });
            }
        }
        Ok(tree)
    }

    fn spanning_tree_from_order(
        &self,
        order: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Vec<usize>> {
        if self.sites == 0 {
            return Ok(Vec::new());
        }
        // adjacency: site -> link indices (sorted by construction)
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.sites];
        for (i, l) in self.links.iter().enumerate() {
            adj[l.from].push(i);
            if l.to != l.from {
                adj[l.to].push(i);
            }
        }
        let mut visited = vec![false; self.sites];
        let mut queue = std::collections::VecDeque::new();
        let mut tree = Vec::new();
        visited[0] = true;
        queue.push_back(0usize);
        while let Some(site) = queue.pop_front() {
            for li in order(&adj[site]) {
                let l = self.links[li];
                let other = if l.from == site { l.to } else { l.from };
                if !visited[other] {
                    visited[other] = true;
                    tree.push(li);
                    queue.push_back(other);
                }
            }
        }
        if let Some(site) = visited.iter().position(|&v| !v) {
            return Err(Error::Disconnected { site });
        }
        Ok(tree)
    }

    fn boundary2_matrix(&self) -> IntMatrix {
        let cols: Vec<IntegerChain> =
            (0..self.plaquettes.len()).map(|p| self.plaquette_boundary(p)).collect();
        IntMatrix::from_i64(self.links.len(), self.plaquettes.len(), |r, c| {
            cols[c].coefficient(r)
        })
    }

    /// Integer basis of the closed 2-chains (the kernel of the degree-2
    /// boundary), via exact column reduction. Empty when every 2-chain has a
    /// nonvanishing boundary.
    pub fn kernel_basis_2chains(&self) -> Vec<IntegerChain> {
        if self.plaquettes.is_empty() {
            return Vec::new();
        }
        let ech = column_echelon(&self.boundary2_matrix());
        ech.kernel_columns()
            .into_iter()
            .map(|c| {
                let col = ech
                    .transform
                    .column_i64(c)
                    .expect("kernel coordinates exceed i64 range");
                IntegerChain::from_pairs(2, col.into_iter().enumerate().map(|(p, v)| (p, v)))
            })
            .collect()
    }

    /// Echelon factorization of the degree-2 boundary matrix, for callers
    /// that need both the kernel and integer preimages.
    pub fn boundary2_echelon(&self) -> ColumnEchelon {
        column_echelon(&self.boundary2_matrix())
    }

    /// Finds an integer 2-chain with the prescribed boundary, or reports the
    /// homology obstruction.
    pub fn solve_boundary2(&self, target: &IntegerChain) -> Result<IntegerChain> {
        if target.degree() != 1 {
            return Err(Error::DegreeMismatch { chain: target.degree(), expected: 1 });
        }
        let ech = self.boundary2_echelon();
        let b: Vec<BigInt> = (0..self.links.len())
            .map(|l| BigInt::from(target.coefficient(l)))
            .collect();
        let x = ech.solve(&b).ok_or(Error::HomologyObstruction)?;
        use num::ToPrimitive;
        let coeffs: Option<Vec<i64>> = x.iter().map(|v| v.to_i64()).collect();
        let coeffs = coeffs.ok_or_else(|| {
            Error::InvalidParameter("integer preimage exceeds i64 range".into())
        })?;
        Ok(IntegerChain::from_pairs(
            2,
            coeffs.into_iter().enumerate().map(|(p, v)| (p, v)),
        ))
    }

    /// Serializes the complex description to JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Reads a complex description from JSON, re-validating the cell data.
    pub fn from_json(text: &str) -> Result<Self> {
        let c: CellComplex = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }
}

/// A hypercubic complex together with coordinate lookups.
///
/// Sites are enumerated with coordinate 0 varying fastest. Links are grouped
/// per site in axis order, plaquettes per site in plane order (mu < nu). The
/// boundary walk of the plaquette based at `n` in the (mu, nu) plane is
/// `n -> n+mu -> n+mu+nu -> n+nu -> n`.
#[derive(Debug, Clone)]
pub struct HypercubicComplex {
    pub complex: CellComplex,
    extents: Vec<usize>,
    periodic: Vec<bool>,
    sizes: Vec<usize>,
    link_of: BTreeMap<(usize, usize), usize>,
}

impl HypercubicComplex {
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    /// Site index of a coordinate tuple (periodic coordinates wrap).
    pub fn site(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (k, &c) in coords.iter().enumerate() {
            let c = if self.periodic[k] { c % self.extents[k] } else { c };
            assert!(c < self.sizes[k], "coordinate {c} out of range in axis {k}");
            idx += c * stride;
            stride *= self.sizes[k];
        }
        idx
    }

    /// Index of the link leaving `coords` in direction `mu`, if present.
    pub fn link(&self, coords: &[usize], mu: usize) -> Option<usize> {
        self.link_of.get(&(self.site(coords), mu)).copied()
    }
}

/// Builds the hypercubic complex with the given extent (number of links) per
/// axis. Open axes get `extent + 1` site rows, periodic axes wrap.
pub fn build_hypercubic(extents: &[usize], periodic: &[bool]) -> Result<HypercubicComplex> {
    let d = extents.len();
    if d == 0 || periodic.len() != d {
        return Err(Error::InvalidParameter(
            "extents and periodic flags must be nonempty and of equal length".into(),
        ));
    }
    if extents.iter().any(|&e| e == 0) {
        return Err(Error::InvalidParameter("every extent must be at least 1".into()));
    }
    let sizes: Vec<usize> =
        extents.iter().zip(periodic).map(|(&e, &p)| if p { e } else { e + 1 }).collect();
    let nsites: usize = sizes.iter().product();

    let coords_of = |mut idx: usize| -> Vec<usize> {
        let mut c = Vec::with_capacity(d);
        for &s in &sizes {
            c.push(idx % s);
            idx /= s;
        }
        c
    };
    let index_of = |coords: &[usize]| -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (k, &c) in coords.iter().enumerate() {
            idx += c * stride;
            stride *= sizes[k];
        }
        idx
    };
    // Neighbor in +mu, None when the open edge is reached.
    let neighbor = |coords: &[usize], mu: usize| -> Option<Vec<usize>> {
        let mut n = coords.to_vec();
        if periodic[mu] {
            n[mu] = (n[mu] + 1) % extents[mu];
            Some(n)
        } else if n[mu] + 1 < sizes[mu] {
            n[mu] += 1;
            Some(n)
        } else {
            None
        }
    };

    let mut links = Vec::new();
    let mut link_of = BTreeMap::new();
    for s in 0..nsites {
        let c = coords_of(s);
        for mu in 0..d {
            // Periodic axes always carry a +mu link; open axes stop at the edge.
            let has = periodic[mu] || c[mu] + 1 < sizes[mu];
            if has {
                let n = neighbor(&c, mu).unwrap();
                link_of.insert((s, mu), links.len());
                links.push(Link { from: s, to: index_of(&n) });
            }
        }
    }

    let mut plaquettes = Vec::new();
    for s in 0..nsites {
        let c = coords_of(s);
        for mu in 0..d {
            for nu in mu + 1..d {
                let Some(c_mu) = neighbor(&c, mu) else { continue };
                let Some(c_nu) = neighbor(&c, nu) else { continue };
                let walk = vec![
                    Step::forward(link_of[&(s, mu)]),
                    Step::forward(link_of[&(index_of(&c_mu), nu)]),
                    Step::backward(link_of[&(index_of(&c_nu), mu)]),
                    Step::backward(link_of[&(s, nu)]),
                ];
                plaquettes.push(Plaquette { walk, area: None });
            }
        }
    }

    let complex = CellComplex::new(nsites, links, plaquettes)?;
    Ok(HypercubicComplex {
        complex,
        extents: extents.to_vec(),
        periodic: periodic.to_vec(),
        sizes,
        link_of,
    })
}
