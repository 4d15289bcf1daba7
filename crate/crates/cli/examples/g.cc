-- x is bound outside the inner lambda's type, so its polarity is unrestricted.
pretype U

main \(x: {*} U) (\(y: {x} U) y) x
