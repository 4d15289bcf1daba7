-- x occurs contravariantly in the capture set of y's type.
pretype U

main \(x: {*} U) \(y: {x} U) y
