//! Benchmark corpus.

/// Named judgements exercised by the pipeline benchmarks.
pub const CORPUS: &[(&str, &str)] = &[
    (
        "m1",
        "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com",
    ),
    (
        "counter",
        "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; if (x > 2) then abort : com",
    ),
    (
        "linear_search",
        "x[k] : varint, y : expint, abort : com |- new_int i := 0 in new_int p := y in \
         while (i < k) do { if (x[i] = p) then abort; i := i + 1 } : com",
    ),
    (
        "local_array",
        "abort : com |- new_int a[3] := 0 in a[1] := 1; if a[1] + a[0] = 1 then abort : com",
    ),
];

/// The linear-search variant over a fixed array of `n` cells.
pub fn fixed_search(n: u32) -> String {
    format!(
        "x[{n}] : varint, y : expint, abort : com |- new_int i := 0 in new_int p := y in \
         while (i < {n}) do {{ if (x[i] = p) then abort; i := i + 1 }} : com"
    )
}
