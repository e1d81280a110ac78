# Core Components Package 