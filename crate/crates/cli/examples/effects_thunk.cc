-- Passing a thunk that closes over an inner capability to an outer effect.
ext effects

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

main handle x : {*} Eff[{*} forall(u: Unit) Unit, Unit] = handler(thunk, k) => thunk unit in
  handle y : {*} Eff[Unit, Unit] = handler(a, k2) => k2 a in
    do x (\(u: Unit) do y unit)
