# Beamforming methods (pluggable): optimal, smi, linear, urglq, urglq_uncorrected
