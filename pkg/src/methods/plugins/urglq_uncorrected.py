"""URGLQ with the steering-vector correction switched off (presumed a0 kept)."""
from src.methods.plugins.urglq import UrglqMethod

plugin = UrglqMethod("urglq_uncorrected", correction=False)
