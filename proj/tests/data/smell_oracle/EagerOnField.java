package org.example.oracle;

import static org.junit.Assert.assertEquals;
import static org.junit.Assert.assertNotNull;
import static org.junit.Assert.assertTrue;

import java.io.File;
import java.net.Socket;
import java.sql.Connection;
import java.sql.DriverManager;
import java.util.ArrayList;
import java.util.List;
import java.util.concurrent.ExecutorService;
import java.util.concurrent.Executors;
import org.junit.Before;
import org.junit.Test;

public class LedgerTest {
  private Ledger ledger = new Ledger();

  @Test
  public void testEagerOnField() throws Exception {
    ledger.record(5);
    ledger.reset();
  }
}
