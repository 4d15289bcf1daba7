-- Coupling the two parameters through a type variable instead.
pretype U

main /\[X <: {*} U] \(x: X) \(y: X) y
