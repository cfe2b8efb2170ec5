DI    = "DI"
GT    = "GT"
MAP   = "MAP"
LASSO = "LASSO"
MWC   = "MWC"
