# Fusion Toolkit Tests
