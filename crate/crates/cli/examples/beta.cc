-- Two beta steps; the first substitutes x in a capture set.
main (\(x: {*} Top) \(y: {} Top) x) (\(z: {} Top) z) (\(w: {} Top) w)
