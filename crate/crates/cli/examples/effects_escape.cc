-- The handled program returns a closure over the effect capability.
ext effects

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

main handle x : {*} Eff[Unit, Unit] = handler(y, k) => k y in \(y: Unit) do x y
