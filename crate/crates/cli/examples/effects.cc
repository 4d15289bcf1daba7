-- A deep handler resumed twice.
ext effects

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

main handle e : {*} Eff[Unit, Unit] = handler(y, k) => k y in
  (\(a: Unit) \(b: Unit) b) (do e unit) (do e unit)
