#include <stdio.h>
#include "rlem.h"
int main(void) {
  RlemTable *t = NULL; size_t k; uint64_t s, c;
  if (rlem_table_parse("RE", &t) != RLEM_STATUS_OK) return 1;
  rlem_table_id(t, &k, &s, &c);
  printf("k=%zu serial=%llu canonical=%llu\n", k, (unsigned long long)s, (unsigned long long)c);
  rlem_table_free(t);
  char buf[128]; size_t n;
  printf("bad=%d\n", rlem_table_parse("2-99", &t));
  rlem_last_error(buf, sizeof buf, &n); printf("err=%s\n", buf);
  return 0;
}
