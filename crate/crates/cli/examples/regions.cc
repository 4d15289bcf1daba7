-- Allocate in a region and read the cell back before the region ends.
ext regions

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

main region r in (\(p: {r} Ptr[Unit]) !p) (new r [Unit] unit)
