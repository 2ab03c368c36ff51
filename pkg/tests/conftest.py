# Tiny 2xN gate kernels lose badly to BLAS thread churn; pin before numpy
# loads anywhere in the suite.
import os

os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")
