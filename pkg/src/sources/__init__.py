# Snapshot sources: recorded BFSN files
