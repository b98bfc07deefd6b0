/// Every multiset `{x_1 <= ... <= x_parts}` with `Σ 2^(x_j + 1) = total`,
/// in lexicographic order.
pub fn power_sum_solutions(total: u64, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if total % 2 == 1 || total == 0 {
        return out;
    }
    let top = 63 - total.leading_zeros();
    let mut stack = Vec::with_capacity(parts);
    descend(total, parts, top.saturating_sub(1), &mut stack, &mut out);
    for m in &mut out {
        m.reverse();
    }
    out.sort();
    out
}

// Picks exponents in non-increasing order, largest first.
fn descend(rest: u64, parts: usize, max_x: u32, stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if rest == 0 {
            out.push(stack.clone());
        }
        return;
    }
    let parts64 = parts as u64;
    if rest < 2 * parts64 {
        return;
    }
    for x in (0..=max_x).rev() {
        let w = 2u64 << x;
        if w > rest {
            continue;
        }
        if w.saturating_mul(parts64) < rest {
            break;
        }
        stack.push(x);
        descend(rest - w, parts - 1, x, stack, out);
        stack.pop();
    }
}
