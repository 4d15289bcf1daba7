-- Loggers that close over different capabilities.

assume-type String <: {} Top
type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\[X <: {*} Top] \(x: X) x

pretype Logger = forall(line: String) Unit

assume-term File : {*} Logger
assume-term Console : {*} Logger

type Bool = {} forall[X <: {*} Top] {} forall(t: X) {t} forall(f: X) X
def true = /\[X <: {*} Top] \(t: X) \(f: X) t

def fileLogger = \(line: String) File line
def printLogger = \(line: String) Console line
def pureLogger = \(line: String) unit

def warn = \(log: {*} Logger) \(line: String) log line
def myLogger = warn printLogger

-- The condition mentions printLogger, yet only the branches decide the type.
def someLogger =
  ((\(log: {*} Logger) true) printLogger) [{File} Logger] fileLogger pureLogger

main warn printLogger
