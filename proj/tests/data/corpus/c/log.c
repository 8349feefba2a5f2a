#include <stdarg.h>
#include <stdio.h>
#include <string.h>
#include <time.h>

#include "log.h"

static enum log_level current_level = LOG_INFO;
static FILE *sink;

static const char *const level_names[] = {
	[LOG_DEBUG] = "debug",
	[LOG_INFO]  = "info",
	[LOG_WARN]  = "warn",
	[LOG_ERROR] = "error",
};

void log_set_level(enum log_level level)
{
	current_level = level;
}

void log_set_sink(FILE *fp)
{
	sink = fp;
}

void log_emit(enum log_level level, const char *fmt, ...)
{
	va_list ap;
	char stamp[32];
	time_t now;
	struct tm tm;

	if (level < current_level)
		return;
	if (!sink)
		sink = stderr;

	now = time(NULL);
	gmtime_r(&now, &tm);
	strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

	fprintf(sink, "%s %-5s ", stamp, level_names[level]);
	va_start(ap, fmt);
	vfprintf(sink, fmt, ap);
	va_end(ap);
	fputc('\n', sink);
}
