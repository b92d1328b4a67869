# Robust adaptive beamforming: URGLQ pipeline, baselines and Monte Carlo harness
