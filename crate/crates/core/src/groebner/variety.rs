use super::BoolIdeal;

/// All 0/1 points annihilating every generator, as bitsets of the variables
/// set to 1, in increasing numeric order of the reversed assignment
/// (variable 0 decided first, 0 before 1).
///
/// Backtracking over variables in index order; each generator is checked as
/// soon as its highest variable is assigned.
pub fn variety(ideal: &BoolIdeal) -> Vec<u128> {
    let num_vars = ideal.num_vars();
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); num_vars];
    for (i, g) in ideal.generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        match g.variables() {
            // a nonzero constant: no points at all
            0 => return Vec::new(),
            vars => closing[127 - vars.leading_zeros() as usize].push(i),
        }
    }
    let mut points = Vec::new();
    search(ideal, &closing, 0, 0, &mut points);
    points
}

fn search(ideal: &BoolIdeal, closing: &[Vec<usize>], v: usize, point: u128, out: &mut Vec<u128>) {
    if v == closing.len() {
        out.push(point);
        return;
    }
    for candidate in [point, point | 1 << v] {
        if closing[v]
            .iter()
            .all(|&g| !ideal.generators[g].evaluate(candidate))
        {
            search(ideal, closing, v + 1, candidate, out);
        }
    }
}
