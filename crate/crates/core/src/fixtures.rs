//! Instances transcribed from the drawings that motivate the algorithm,
//! plus the partial solutions shown in them. Vertex numbering is 0-based;
//! the comments use the labels of the drawings.

use crate::instance::Instance;

/// Two-vertex instance: one forest edge and a parallel link.
pub fn two_vertex() -> Instance {
    Instance::new(2, vec![(0, 1)], vec![(0, 1)])
}

/// Forest edges {1,2},{3,4}; links {2,3},{4,1}.
pub fn four_cycle() -> Instance {
    Instance::new(4, vec![(0, 1), (2, 3)], vec![(1, 2), (3, 0)])
}

/// Bridge-covering example: a row of `m` two-vertex paths 1..2m plus the
/// paths a-b and c-d. Links list the matching first (2-3, 4-5, ..., a-c,
/// b-d), then the rest of the optimum.
pub fn figure1(m: usize) -> Instance {
    let (a, b, c, d) = (2 * m, 2 * m + 1, 2 * m + 2, 2 * m + 3);
    let mut forest: Vec<(usize, usize)> = (0..m).map(|i| (2 * i, 2 * i + 1)).collect();
    forest.extend([(a, b), (c, d)]);
    let mut links: Vec<(usize, usize)> = (0..m - 1).map(|i| (2 * i + 1, 2 * i + 2)).collect();
    links.extend([(a, c), (b, d), (0, a), (b, 2)]);
    // 1-based {2j, 2j+3}, then {2m-2, 2m}
    links.extend((1..m.saturating_sub(1)).map(|j| (2 * j - 1, 2 * j + 2)));
    links.push((2 * m - 3, 2 * m - 1));
    Instance::new(2 * m + 4, forest, links)
}

/// Gluing example: two rows of `2k` vertices, forest edges pair up
/// neighbours in each row. Vertical links come first, so a matching scan in
/// link order picks them. `decoy` prepends the link {1b, 2a}, which makes a
/// plain greedy matching leave two leaves unmatched.
pub fn figure2(k: usize, decoy: bool) -> Instance {
    let w = 2 * k;
    let mut forest = Vec::new();
    for row in [0, w] {
        forest.extend((0..k).map(|i| (row + 2 * i, row + 2 * i + 1)));
    }
    let mut links = Vec::new();
    if decoy {
        links.push((w, 1));
    }
    links.extend((0..w).map(|i| (i, w + i)));
    for row in [0, w] {
        links.extend((0..k - 1).map(|i| (row + 2 * i + 1, row + 2 * i + 2)));
    }
    Instance::new(2 * w, forest, links)
}

/// One long path 1..2k with overlapping links {1,3}, {2,5}, {4,7}, ...,
/// {2k-2, 2k}.
pub fn figure3(k: usize) -> Instance {
    let n = 2 * k;
    let forest = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut links = vec![(0, 2)];
    links.extend((1..k - 1).map(|j| (2 * j - 1, 2 * j + 2)));
    links.push((n - 3, n - 1));
    Instance::new(n, forest, links)
}

/// Alternating-trail example. The tree path is x=0,1,...,8=z with S-links
/// l1={1,2}, l2={3,4}, l3={5,6}, l4={6,7}; side vertices 9..17 hang off 3, 5
/// and 8; 18..22 stand for the contracted outside components a..e. Links to
/// 21 and 22 only touch side vertices, closing the instance up without
/// creating new outside paths between path vertices.
///
/// Returns the instance and the partial solution S (link indices).
pub fn figure4_state() -> (Instance, Vec<usize>) {
    let (s3a, s3b, s3c, s3d, s5a, s8a, s8b, s8c, s8d) = (9, 10, 11, 12, 13, 14, 15, 16, 17);
    let (a, b, c, d, e) = (18, 19, 20, 21, 22);
    let forest = vec![
        (0, 1),
        (2, 3),
        (3, s3a),
        (s3b, s3c),
        (s3b, s3d),
        (4, 5),
        (5, s5a),
        (7, 8),
        (8, s8a),
        (8, s8b),
        (s8b, s8c),
    ];
    let links = vec![
        // S
        (1, 2),
        (3, 4),
        (5, 6),
        (6, 7),
        (3, s3b),
        (s8b, s8d),
        // trail links
        (0, a),
        (a, 2),
        (1, b),
        (b, c),
        (c, 6),
        (5, 7),
        (6, 8),
        // closure
        (s3a, d),
        (s3c, d),
        (s3d, e),
        (s5a, d),
        (s8a, e),
        (s8c, e),
        (s8d, d),
        (d, e),
    ];
    (Instance::new(23, forest, links), (0..6).collect())
}

/// Links of the partial solution after augmenting [`figure4_state`] along
/// the drawn trail.
pub fn figure5_links() -> Vec<usize> {
    vec![1, 4, 5, 6, 7, 8, 9, 10, 11, 12]
}

/// Simple component C: P1 = v1-u1 (0-1), P2 = v2-w2-w1-u2 (2-3-4-5), links
/// {v1,v2} and {u1,u2}. Each outside component is a 4-cycle of two forest
/// edges and two S-links.
///
/// Without `second`: outside components C1, C2 joined as v2 - C1 - C2 - v1,
/// so a good cycle keeps {u1,u2}. With `second`: v1 - C1 - C2 - u2 and
/// u1 - D1 - D2 - v2, so gluing drops both links of C.
pub fn figure6_state(second: bool) -> (Instance, Vec<usize>) {
    let blobs = if second { 4 } else { 2 };
    let n = 6 + 4 * blobs;
    let mut forest = vec![(0, 1), (2, 3), (3, 4), (4, 5)];
    let mut links = vec![(0, 2), (1, 5)];
    for i in 0..blobs {
        let k = 6 + 4 * i;
        forest.extend([(k, k + 1), (k + 2, k + 3)]);
        links.extend([(k, k + 2), (k + 1, k + 3)]);
    }
    let s: Vec<usize> = (0..links.len()).collect();
    let (c1, c2, d1, d2) = (6, 10, 14, 18);
    if second {
        links.extend([(0, c1), (c1 + 1, c2), (c2 + 1, 5), (1, d1), (d1 + 1, d2), (d2 + 1, 2)]);
    } else {
        links.extend([(2, c1), (c1 + 1, c2), (c2 + 1, 0)]);
    }
    (Instance::new(n, forest, links), s)
}
