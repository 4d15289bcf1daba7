-- Ill-typed on purpose: the pointer outlives its region.
ext regions

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

main !(region r in new r [Unit] unit)
