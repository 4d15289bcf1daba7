-- Summing square roots, bailing out with nan on a negative input.
-- Numbers only carry their sign, which is all the control flow needs.
ext returns

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

type Double = {} forall[X <: {*} Top] {} forall(pos: X) {pos} forall(neg: X) X
def pos = /\[X <: {*} Top] \(p: X) \(n: X) p
def neg = /\[X <: {*} Top] \(p: X) \(n: X) n
def nan = neg
def plus = \(a: Double) \(b: Double) a [Double] b a

type Op[T, C] = {*} forall(v: T) {*} forall(s: C) C
type List[T] = {} forall[C <: {*} Top] {} forall(g: Op[T, C]) {g} forall(s: C) C
def nil = /\[T <: {*} Top] /\[C <: {*} Top] \(g: Op[T, C]) \(s: C) s
def cons = /\[T <: {*} Top] \(hd: T) \(tl: List[T])
  /\[C <: {*} Top] \(g: Op[T, C]) \(s: C) g hd (tl [C] g s)

def root = \(x: Double) \(ret: {*} forall(r: Double) Double)
  x [{ret} forall(u: Unit) Double] (\(u: Unit) x) (\(u: Unit) ret nan) unit

def sumRoots = \(xs: List[Double]) \(ret: {*} forall(r: Double) Double)
  xs [Double] (\(x: Double) \(acc: Double) plus (root x ret) acc) pos

def input = cons [Double] pos (cons [Double] pos (cons [Double] pos (cons [Double] neg (nil [Double]))))

main handle r : Double in sumRoots input (\(x: Double) return r x)
