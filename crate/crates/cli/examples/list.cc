-- Right-fold encoded lists of pure elements.

type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

type Op[T, C] = {*} forall(v: T) {*} forall(s: C) C
type List[T] = {} forall[C <: {*} Top] {} forall(g: Op[T, C]) {g} forall(s: C) C

def nil = /\[T <: {*} Top] /\[C <: {*} Top] \(g: Op[T, C]) \(s: C) s

def cons = /\[T <: {*} Top] \(hd: T) \(tl: List[T])
  /\[C <: {*} Top] \(g: Op[T, C]) \(s: C) g hd (tl [C] g s)

def map = /\[A <: {} Top] /\[B <: {} Top] \(xs: List[A]) \(f: {*} forall(a: A) B)
  xs [List[B]] (\(elem: A) \(accum: List[B]) cons [B] (f elem) accum) (nil [B])

def map2 = /\[A <: {} Top] /\[B <: {} Top] \(f: {*} forall(a: A) B) \(xs: List[A])
  xs [List[B]] (\(elem: A) \(accum: List[B]) cons [B] (f elem) accum) (nil [B])

def pureMap = /\[A <: {} Top] /\[B <: {} Top] \(xs: List[A]) \(f: {} forall(a: A) B)
  xs [List[B]] (\(elem: A) \(accum: List[B]) cons [B] (f elem) accum) (nil [B])

main map [Unit] [Unit] (cons [Unit] unit (cons [Unit] unit (nil [Unit]))) (\(a: Unit) a)
