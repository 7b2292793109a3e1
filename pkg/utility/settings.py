from decouple import config


class Settings:
    log_level = config("SSL_LOG_LEVEL", default="WARNING")
    fixed_point_tolerance = config("SSL_FIXED_POINT_TOLERANCE", default=1e-10, cast=float)
    fixed_point_max_iterations = config(
        "SSL_FIXED_POINT_MAX_ITERATIONS", default=100000, cast=int
    )
    # Pivot threshold, relative to the largest diagonal magnitude.
    singular_rtol = config("SSL_SINGULAR_RTOL", default=1e-12, cast=float)
    nw_underflow = config("SSL_NW_UNDERFLOW", default=1e-300, cast=float)
    workers = config("SSL_WORKERS", default=1, cast=int)
